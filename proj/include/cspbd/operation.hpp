#pragma once

#include "cspbd/language.hpp"
#include "cspbd/relation.hpp"

#include <span>
#include <string>
#include <vector>

namespace cspbd {

// A finitary operation as a dense total table over {0, ..., domain_size-1},
// indexed in row-major mixed radix with the first argument most significant.
// domain_size 0 is the degenerate table over the empty domain, used as the
// trivial witness for languages with no active values.
class OperationTable {
public:
    OperationTable(int arity, int domain_size, std::vector<Value> cells);

    int arity() const { return arity_; }
    int domain_size() const { return domain_size_; }
    const std::vector<Value>& cells() const { return cells_; }

    std::size_t encode(std::span<const Value> args) const;
    Value apply(std::span<const Value> args) const;

    bool operator==(const OperationTable& other) const = default;

private:
    int arity_;
    int domain_size_;
    std::vector<Value> cells_;
};

// The named total operations, defined for every domain size.
enum class BuiltinOp { Max, Min, DualDiscriminator };

int builtin_arity(BuiltinOp op);
std::string builtin_name(BuiltinOp op);
Value eval_builtin(BuiltinOp op, std::span<const Value> args);
OperationTable materialize_builtin(BuiltinOp op, int domain_size);

// f(x, ..., x) == x for every x.
bool is_idempotent(const OperationTable& op);

// Componentwise application of an arity-a operation to a aligned tuples.
Tuple apply_rowwise(const OperationTable& op, std::span<const Tuple> rows);

// Exhaustive closure check over every tuple of rows (with repetition).
bool preserves(const OperationTable& op, const Relation& relation);

// Closure on the given sorted value set: every argument tuple drawn from it
// maps back into it.
bool is_closed_on(const OperationTable& op, std::span<const Value> values);

// Language-level preservation: the restriction of op to the active domain
// must be an operation on it (no escape) and must preserve every relation.
bool preserves_language(const OperationTable& op, const Language& language);

} // namespace cspbd
