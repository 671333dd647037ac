#pragma once

#include "cspbd/class_expr.hpp"
#include "cspbd/instance.hpp"
#include "cspbd/limits.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace cspbd {

struct Graph {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges; // unordered, no self-loops

    Graph() = default;
    Graph(int num_vertices, std::vector<std::pair<int, int>> edges);
};

struct HittingSetInstance {
    int universe = 0;
    int p = 0; // uniform set size
    std::vector<std::vector<int>> sets;

    HittingSetInstance() = default;
    HittingSetInstance(int universe, int p, std::vector<std::vector<int>> sets);
};

// Grows undersized sets with fresh universe elements until every set has
// exactly target_p elements. Fresh elements are appended deterministically
// and never shared, so the minimum hitting set size is unchanged.
HittingSetInstance pad_hitting_set(const HittingSetInstance& input, int target_p);

// Exact oracles, brute force by increasing size then lexicographic order.
std::optional<std::vector<int>> solve_vertex_cover(const Graph& graph, int k);
std::optional<std::vector<int>> solve_hitting_set(const HittingSetInstance& instance, int k);
int min_vertex_cover_size(const Graph& graph);
int min_hitting_set_size(const HittingSetInstance& instance);

// A language all of whose proper sublanguages belong to the target class
// while the language itself does not. Relations have uniform arity.
struct NonHellyWitness {
    Language language;
    int arity = 0;
    int domain_size = 0;
};

NonHellyWitness make_non_helly_witness(Language language);
// Re-checks the defining property against the class expression.
bool validate_non_helly_witness(const NonHellyWitness& witness, const ClassExpr& expr, const Limits& limits);

struct WitnessSearchResult {
    std::optional<NonHellyWitness> witness;
    bool resource_limited = false;
};

// Deterministic enumeration of candidate languages (by size, then domain,
// then arity, then tuple-mask order) for a non-Helly witness within the caps.
WitnessSearchResult find_non_helly_witness(const ClassExpr& expr, int arity_cap, int domain_cap, int size_cap,
                                           const Limits& limits);

// Vertex-cover construction over domain {0,1,2,3}: one variable per vertex;
// each edge carries the ternary-domain inequality when the class contains the
// three two-value unary relations, and their three binary extensions
// otherwise. Minimum backdoor size equals the minimum vertex cover size.
// Requires an idempotent class.
CspInstance gen_vertex_cover_csp(const Graph& graph, const ClassExpr& expr, const Limits& limits);

// Boolean construction: when every Boolean language of arity <= 2 belongs to
// the class, encodes a 3-uniform hitting set with a ternary gadget per set;
// otherwise encodes a vertex cover with either the single-tuple binary
// relation or a full non-member Boolean language per edge. Requires an
// idempotent class and the matching input kind.
CspInstance gen_boolean_csp(const std::variant<Graph, HittingSetInstance>& input, const ClassExpr& expr,
                            const Limits& limits);

// Single-constraint construction: one n-ary relation whose rows encode each
// hitting-set block with two or three rows (per the membership flag of the
// block's two-value gadget), all other columns constant. Minimum backdoor
// size equals the minimum hitting set size.
CspInstance gen_single_constraint_csp(const HittingSetInstance& input, const std::vector<bool>& class_flags);
std::vector<bool> single_constraint_flags(const HittingSetInstance& input, const ClassExpr& expr,
                                          const Limits& limits);

// Boolean uniform construction: one constraint per set over domain {0,1},
// every constraint the same gadget relation. Minimum backdoor size equals the
// minimum hitting set size.
CspInstance gen_boolean_uniform_csp(const HittingSetInstance& input, const ClassExpr& expr, const Limits& limits);

// Renaming-chain construction: per set, a chain of bijection constraints
// through the set's variables links a renamed copy of the witness's first
// relation to renamed copies of the remaining ones, every block over fresh
// disjoint domains. Minimum backdoor size equals the minimum hitting set
// size for idempotent, value-renamable, domain-decomposable classes (the
// caller asserts the latter two).
CspInstance gen_renaming_chain_csp(const HittingSetInstance& input, const NonHellyWitness& witness,
                                   const ClassExpr& expr, const Limits& limits);

} // namespace cspbd
