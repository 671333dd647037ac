#pragma once

#include "cspbd/language.hpp"
#include "cspbd/limits.hpp"
#include "cspbd/operation.hpp"
#include "cspbd/poly_search.hpp"
#include "cspbd/set_function.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cspbd {

struct ClassExpr;
using ClassExprPtr = std::shared_ptr<const ClassExpr>;

// Composite-class expression tree. Atomic-fixed leaves hold either a named
// total rule (defined for every domain size) or a finite table, which rejects
// languages whose values exceed it. The children of AllButH must be simple,
// i.e. atomic-fixed or intersections thereof.
struct AtomicFixedNode {
    std::variant<BuiltinOp, OperationTable> op;
};
struct AtomicFamilyNode {
    IdentityFamily family;
};
struct IntersectNode {
    std::vector<ClassExprPtr> children;
};
struct UnionNode {
    std::vector<ClassExprPtr> children;
};
struct AllButHNode {
    int h;
    std::vector<ClassExprPtr> children;
};

struct ClassExpr {
    std::variant<AtomicFixedNode, AtomicFamilyNode, IntersectNode, UnionNode, AllButHNode> node;
};

ClassExprPtr make_atomic(BuiltinOp op);
ClassExprPtr make_atomic(OperationTable table);
ClassExprPtr make_family(IdentityFamily family);
ClassExprPtr make_intersect(std::vector<ClassExprPtr> children);
ClassExprPtr make_union(std::vector<ClassExprPtr> children);
ClassExprPtr make_all_but_h(int h, std::vector<ClassExprPtr> children);

bool expr_equal(const ClassExpr& a, const ClassExpr& b);
// Atomic-fixed, or an intersection of simple expressions.
bool is_simple(const ClassExpr& expr);
std::string expr_label(const ClassExpr& expr);

// Membership evidence: the operation or set function backing a positive
// atomic answer, tagged with the leaf it came from.
struct Witness {
    std::string source;
    std::variant<OperationTable, SetFunction> value;
};

struct ClassReport {
    bool member = false;
    std::vector<Witness> evidence;
    std::optional<int> helly_bound;
    bool idempotent_class = false;
};

// Decides language membership. Atomic-fixed leaves apply the restriction
// rule (the operation must be closed on the active domain and preserve every
// relation); family leaves run the identity-constrained search or the tsi
// test; boolean nodes combine children, short-circuiting on definite
// answers. A ResourceLimitError from a child only propagates when the
// overall answer cannot be decided without it.
ClassReport member(const ClassExpr& expr, const Language& language, const Limits& limits);
bool member_bool(const ClassExpr& expr, const Language& language, const Limits& limits);

// Derivable Helly bound: 1 for simple expressions, the child count for a
// union of distinct simple expressions, h+1 for AllButH. Expressions
// containing a family leaf have no derivable bound.
std::optional<int> helly_bound(const ClassExpr& expr);

// True iff every atomic-fixed table is idempotent; every menu family forces
// idempotence.
bool is_idempotent_class(const ClassExpr& expr);

} // namespace cspbd
