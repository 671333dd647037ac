#pragma once

#include "cspbd/class_expr.hpp"
#include "cspbd/instance.hpp"
#include "cspbd/limits.hpp"

#include <optional>
#include <vector>

namespace cspbd {

// Generalized arc consistency: the greatest fixpoint of support filtering
// starting from full domains. A value survives iff every constraint on its
// variable has a tuple consistent with the remaining sets. Returns the
// per-variable value sets, or nullopt when some variable (or a violated
// nullary constraint) wipes out.
std::optional<std::vector<std::vector<Value>>> enforce_gac(const CspInstance& instance);

// Complete backtracking search with GAC propagation after every decision
// (variables in ascending index order, values ascending).
std::optional<std::vector<Value>> solve_instance(const CspInstance& instance);

// Branches on the backdoor variables in ascending mixed-radix order and
// solves each residual instance with the propagating search. The backdoor is
// verified with the naive check first. Returns the first solution found, over
// the original variables.
std::optional<std::vector<Value>> solve_via_backdoor(const CspInstance& instance, const std::vector<int>& backdoor,
                                                     const ClassExpr& expr, const Limits& limits);

} // namespace cspbd
