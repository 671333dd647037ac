#pragma once

#include "cspbd/language.hpp"
#include "cspbd/limits.hpp"
#include "cspbd/operation.hpp"

#include <optional>
#include <string>

namespace cspbd {

// The fixed menu of identity-defined operation families.
struct IdentityFamily {
    enum class Kind { Semilattice, Majority, NearUnanimity, Maltsev, TsiAllArities };

    Kind kind = Kind::Semilattice;
    int nu_arity = 3; // only meaningful for NearUnanimity

    static IdentityFamily semilattice() { return {Kind::Semilattice, 2}; }
    static IdentityFamily majority() { return {Kind::Majority, 3}; }
    static IdentityFamily near_unanimity(int arity);
    static IdentityFamily maltsev() { return {Kind::Maltsev, 3}; }
    static IdentityFamily tsi_all_arities() { return {Kind::TsiAllArities, 0}; }

    int operation_arity() const;
    std::string name() const;

    bool operator==(const IdentityFamily& other) const = default;
};

// True iff the table satisfies the family identities over its whole domain.
bool satisfies_family_identities(const OperationTable& op, const IdentityFamily& family);

// Exhaustive backtracking search for an operation over the active domain of
// the language that satisfies the family identities and preserves every
// relation. Identity-forced cells are filled first, preservation is used to
// prune after every cell decision, and cell/value order is lexicographic, so
// the returned witness is deterministic. The witness is expanded to a total
// table over {0, ..., max(active)+1} in a way that keeps the identities and
// the closure of the active domain.
//
// Returns the witness, or nullopt when no such operation exists. The
// tsi_all_arities family is not searchable here.
std::optional<OperationTable> search_polymorphism(const Language& language, const IdentityFamily& family,
                                                  const Limits& limits);

} // namespace cspbd
