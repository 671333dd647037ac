#pragma once

#include "cspbd/language.hpp"
#include "cspbd/limits.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace cspbd {

// A totally symmetric idempotent operation written as a function of the set
// of argument values. Stored sparsely: sets that were pinned by some
// constraint carry explicit entries, every other set falls back to its
// minimum element (which keeps singletons idempotent and the function total
// over all nonempty subsets). Domain values must fit in a 64-bit mask.
// domain_size 0 marks the trivial witness for languages with no values.
class SetFunction {
public:
    explicit SetFunction(int domain_size, std::map<std::uint64_t, Value> pinned = {});

    int domain_size() const { return domain_size_; }
    const std::map<std::uint64_t, Value>& pinned() const { return pinned_; }

    Value value_of(std::uint64_t set_mask) const;

    bool operator==(const SetFunction& other) const = default;

private:
    int domain_size_;
    std::map<std::uint64_t, Value> pinned_;
};

// Decides whether the language admits a totally symmetric idempotent
// operation of arity |active domain|, phrased on column sets: for every
// relation R and every nonempty subset T of its tuples with |T| <= |D|,
// the tuple (f(S_1), ..., f(S_r)) must lie in R, where S_j collects the
// values of column j over T. Returns a witness or nullopt.
std::optional<SetFunction> tsi_member(const Language& language, const Limits& limits);

// Re-derives every column-set requirement and checks the witness against it.
bool verify_tsi(const SetFunction& f, const Language& language, const Limits& limits);

} // namespace cspbd
