#pragma once

#include "cspbd/class_expr.hpp"
#include "cspbd/instance.hpp"
#include "cspbd/limits.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace cspbd {

struct DetectStats {
    std::int64_t nodes_expanded = 0;
    std::int64_t membership_tests = 0;
};

// Memoizes language membership per canonical language content. Resource
// errors are cached and rethrown, so repeated queries stay deterministic.
class MembershipCache {
public:
    MembershipCache(const ClassExpr& expr, const Limits& limits) : expr_(&expr), limits_(limits) {}

    bool member(const Language& language, DetectStats* stats);

private:
    const ClassExpr* expr_;
    Limits limits_;
    std::map<std::vector<int>, int> results_; // 0 = non-member, 1 = member, 2 = resource error
};

// Enumerates all d^|B| assignments of the candidate backdoor and tests every
// residual language for class membership.
bool check_backdoor_naive(const CspInstance& instance, const std::vector<int>& backdoor, const ClassExpr& expr,
                          const Limits& limits, DetectStats* stats = nullptr);
bool check_backdoor_naive(const CspInstance& instance, const std::vector<int>& backdoor, MembershipCache& cache,
                          const Limits& limits, DetectStats* stats = nullptr);

// One locally consistent assignment of the backdoor variables inside a
// constraint scope, with the surviving subrelation (matching tuples filtered,
// assigned positions projected away).
struct LocalAssignmentEntry {
    PartialAssignment assignment;
    Relation residual;
};

// The assignments of B inside the scope that leave the relation nonempty,
// found by fixing the scope's backdoor variables in ascending index order and
// branching on the values present. At most tuple_count entries exist because
// the filtered subrelations are pairwise disjoint and cover every tuple.
std::vector<LocalAssignmentEntry> local_assignments(const Constraint& constraint, const std::vector<int>& backdoor);

// Backdoor check that never enumerates d^|B| assignments: combines the
// per-constraint local assignments over every constraint subset, and tests
// the language induced by each consistent combination. Exponential in the
// number of constraints instead of the backdoor size, which is what the
// bounded search tree needs (it only ever checks h constraints at a time).
// Agrees with check_backdoor_naive on every input.
bool check_backdoor_factored(const CspInstance& instance, const std::vector<int>& backdoor, const ClassExpr& expr,
                             const Limits& limits, DetectStats* stats = nullptr);
bool check_backdoor_factored(const CspInstance& instance, const std::vector<int>& backdoor, MembershipCache& cache,
                             const Limits& limits, DetectStats* stats = nullptr);

struct BackdoorQuery {
    const CspInstance* instance;
    ClassExprPtr expr;
    int k = 0;          // budget
    int helly_number = 1; // derived or asserted; at least 1
};

// Bounded search tree detector. At each node every h-subset of constraints is
// checked with the factored checker in lexicographic order of index
// combinations; the node succeeds when all pass, otherwise one child per
// missing scope variable of the first failing subset is expanded, depth-first
// in ascending variable order, down to depth k. Returns a backdoor of size
// <= k iff one exists (not necessarily minimum); the witness is the first
// success in this deterministic order.
std::optional<std::vector<int>> find_backdoor_fpt(const BackdoorQuery& query, const Limits& limits,
                                                  DetectStats* stats = nullptr);

// Independent oracle: enumerates variable subsets by increasing size, then
// lexicographically, and returns the first set passing the naive check, so
// the result is a minimum-size backdoor within the budget.
std::optional<std::vector<int>> find_backdoor_bruteforce(const CspInstance& instance, const ClassExpr& expr, int k,
                                                         const Limits& limits, DetectStats* stats = nullptr);

} // namespace cspbd
