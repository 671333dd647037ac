#pragma once

#include "cspbd/backdoor.hpp"
#include "cspbd/class_expr.hpp"
#include "cspbd/generators.hpp"
#include "cspbd/instance.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace cspbd {

using Json = nlohmann::ordered_json;

// Instance schema:
//   {"domain_size": d, "num_vars": n,
//    "constraints": [{"scope": [i, ...], "tuples": [[v, ...], ...]}, ...]}
// Tuples are canonicalized on load; unknown top-level keys (metadata) pass
// through untouched.
Json instance_to_json(const CspInstance& instance);
CspInstance instance_from_json(const Json& j);

// Language schema: {"domain_size": d, "relations": [{"arity": r, "tuples": [...]}, ...]}.
Json language_to_json(const Language& language);
Language language_from_json(const Json& j);

// Operation table schema: {"arity": a, "domain_size": d, "table": [...]}
// with the table flattened in row-major mixed-radix order.
Json operation_to_json(const OperationTable& op);
OperationTable operation_from_json(const Json& j);

Json set_function_to_json(const SetFunction& f);

// Class expression DSL, e.g.
//   {"atomic": "max"}
//   {"atomic_table": {"arity": 2, "domain_size": 3, "table": [...]}}
//   {"family": "near_unanimity", "arity": 4}
//   {"union": [...]}, {"intersect": [...]}
//   {"all_but_h": {"h": 2, "classes": [...]}}
Json class_expr_to_json(const ClassExpr& expr);
ClassExprPtr class_expr_from_json(const Json& j);

Json graph_to_json(const Graph& graph);
Graph graph_from_json(const Json& j);

Json hitting_set_to_json(const HittingSetInstance& instance);
HittingSetInstance hitting_set_from_json(const Json& j);

Json witness_to_json(const NonHellyWitness& witness);
NonHellyWitness witness_from_json(const Json& j);

// Detection report: {"found": b, "backdoor": [...], "nodes_expanded": n,
// "membership_tests": n, "mode": "fpt|naive|bruteforce"}.
Json detection_report(bool found, const std::optional<std::vector<int>>& backdoor, const DetectStats& stats,
                      const std::string& mode);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

} // namespace cspbd
