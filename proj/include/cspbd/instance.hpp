#pragma once

#include "cspbd/language.hpp"
#include "cspbd/relation.hpp"

#include <map>
#include <vector>

namespace cspbd {

// Assignment of values to a subset of the variables, at most one value each.
using PartialAssignment = std::map<int, Value>;

struct Constraint {
    std::vector<int> scope; // distinct variable indices
    Relation relation;      // arity == scope size
};

// A finite-domain CSP: variables 0..num_vars-1 over a shared domain
// {0, ..., domain_size-1} and an ordered list of constraints. Immutable
// after construction.
class CspInstance {
public:
    CspInstance(int num_vars, int domain_size, std::vector<Constraint> constraints);

    int num_vars() const { return num_vars_; }
    int domain_size() const { return domain_size_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    int max_arity() const;
    int max_tuple_count() const;

private:
    int num_vars_;
    int domain_size_;
    std::vector<Constraint> constraints_;
};

// Residual instance plus the original index of each surviving variable
// (ascending, so re-indexing is dense and deterministic).
struct ReducedInstance {
    CspInstance instance;
    std::vector<int> kept_vars;
};

// Assigns the given variables: tuples inconsistent with the assignment are
// dropped, assigned positions are projected away, and remaining variables are
// re-indexed densely by ascending original index. Fully assigned constraints
// become nullary (violated or satisfied).
ReducedInstance apply_assignment_tracked(const CspInstance& instance, const PartialAssignment& assignment);
CspInstance apply_assignment(const CspInstance& instance, const PartialAssignment& assignment);

// The set of distinct constraint relations, as a language over the instance
// domain.
Language residual_language(const CspInstance& instance);

} // namespace cspbd
