#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cspbd {

using Value = int;
using Tuple = std::vector<Value>;

// A relation of fixed arity over the shared domain {0, ..., domain_size-1}.
// Tuples are stored flat, deduplicated and in strictly increasing
// lexicographic order; that sorted matrix is the canonical form, and all
// comparisons are made on it. Arity 0 is allowed: zero tuples means
// "violated", the single empty tuple means "satisfied".
class Relation {
public:
    Relation(int arity, int domain_size, const std::vector<Tuple>& tuples);

    static Relation empty(int arity, int domain_size);
    static Relation nullary_unit(int domain_size); // arity 0, one empty tuple

    int arity() const { return arity_; }
    int domain_size() const { return domain_size_; }
    int tuple_count() const { return tuple_count_; }
    bool has_tuples() const { return tuple_count_ > 0; }

    std::span<const Value> row(int i) const;
    std::vector<Tuple> tuples() const;
    // Values of column j down the canonical row order.
    Tuple column(int j) const;
    // Sorted set of values occurring in some tuple.
    std::vector<Value> occurring_values() const;

    bool contains(std::span<const Value> tuple) const;

    bool operator==(const Relation& other) const;
    bool operator!=(const Relation& other) const { return !(*this == other); }
    // Total order used for canonical language form: (arity, tuples, domain).
    bool operator<(const Relation& other) const;

private:
    Relation() = default;

    int arity_ = 0;
    int domain_size_ = 1;
    int tuple_count_ = 0;
    std::vector<Value> cells_; // row-major, tuple_count_ * arity_ entries
};

// One extra column appended to a relation: either a constant value or a copy
// of an existing column.
struct ColumnSpec {
    enum class Kind { Constant, Copy };
    Kind kind;
    int value; // constant value, or source column index

    static ColumnSpec constant(Value v) { return {Kind::Constant, v}; }
    static ColumnSpec copy_of(int column) { return {Kind::Copy, column}; }
};

// Appends the given columns to every tuple. Appending constants or copies
// never reorders the canonical matrix, so the result is an extension of the
// input in the sense checked by is_extension.
Relation extend_relation(const Relation& base, const std::vector<ColumnSpec>& extra);

// True iff the canonical matrix of `extended` contains every column of the
// canonical matrix of `base` (as a column multiset, rows corresponding by
// position) and each remaining column is constant or a copy of a base column.
bool is_extension(const Relation& extended, const Relation& base);

enum class GadgetKind {
    TwoRow,  // [(e+1,e),(e,e+1)] with the last column duplicated up to the arity
    ThreeRow // [(e+1,e,e),(e,e+1,e),(e,e,e+1)] with the last column duplicated
};

// The hardness-construction building blocks over domain {0, ..., e+1}.
// TwoRow needs arity >= 2, ThreeRow needs arity >= 3.
Relation gadget_relation(GadgetKind kind, int arity, int base_value);

} // namespace cspbd
