#include "cspbd/generators.hpp"

#include "cspbd/bijection.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace cspbd {

Graph::Graph(int num_vertices_, std::vector<std::pair<int, int>> edges_)
    : num_vertices(num_vertices_), edges(std::move(edges_)) {
    if (num_vertices < 0)
        throw std::invalid_argument("graph vertex count must be nonnegative");
    std::set<std::pair<int, int>> seen;
    for (auto& [a, b] : edges) {
        if (a == b)
            throw std::invalid_argument("graph has a self-loop");
        if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices)
            throw std::invalid_argument("graph edge endpoint out of range");
        if (a > b)
            std::swap(a, b);
        if (!seen.insert({a, b}).second)
            throw std::invalid_argument("graph repeats an edge");
    }
    std::sort(edges.begin(), edges.end());
}

HittingSetInstance::HittingSetInstance(int universe_, int p_, std::vector<std::vector<int>> sets_)
    : universe(universe_), p(p_), sets(std::move(sets_)) {
    if (universe < 0)
        throw std::invalid_argument("universe size must be nonnegative");
    if (p < 1 && !sets.empty())
        throw std::invalid_argument("set size must be positive");
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("hitting-set block repeats an element");
        if (static_cast<int>(s.size()) != p)
            throw std::invalid_argument("hitting-set block has wrong size");
        for (int e : s)
            if (e < 0 || e >= universe)
                throw std::invalid_argument("hitting-set element out of range");
    }
}

HittingSetInstance pad_hitting_set(const HittingSetInstance& input, int target_p) {
    if (target_p < input.p)
        throw std::invalid_argument("cannot pad to a smaller set size");
    if (target_p == input.p || input.sets.empty())
        return HittingSetInstance(input.universe, input.sets.empty() ? target_p : input.p, input.sets);

    int next_fresh = input.universe;
    std::vector<std::vector<int>> padded;
    padded.reserve(input.sets.size());
    for (const auto& s : input.sets) {
        std::vector<int> grown = s;
        while (static_cast<int>(grown.size()) < target_p)
            grown.push_back(next_fresh++);
        padded.push_back(std::move(grown));
    }
    return HittingSetInstance(next_fresh, target_p, std::move(padded));
}

namespace {

bool next_combination(std::vector<int>& combo, int n) {
    const int h = static_cast<int>(combo.size());
    int i = h - 1;
    while (i >= 0 && combo[i] == n - h + i)
        --i;
    if (i < 0)
        return false;
    ++combo[i];
    for (int j = i + 1; j < h; ++j)
        combo[j] = combo[j - 1] + 1;
    return true;
}

template <typename Feasible>
std::optional<std::vector<int>> smallest_subset(int n, int k, Feasible&& feasible) {
    for (int size = 0; size <= std::min(n, k); ++size) {
        std::vector<int> combo(size);
        for (int i = 0; i < size; ++i)
            combo[i] = i;
        while (true) {
            if (feasible(combo))
                return combo;
            if (size == 0 || !next_combination(combo, n))
                break;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<std::vector<int>> solve_vertex_cover(const Graph& graph, int k) {
    return smallest_subset(graph.num_vertices, k, [&](const std::vector<int>& cover) {
        for (const auto& [a, b] : graph.edges)
            if (!std::binary_search(cover.begin(), cover.end(), a) &&
                !std::binary_search(cover.begin(), cover.end(), b))
                return false;
        return true;
    });
}

std::optional<std::vector<int>> solve_hitting_set(const HittingSetInstance& instance, int k) {
    return smallest_subset(instance.universe, k, [&](const std::vector<int>& hitting) {
        for (const auto& s : instance.sets) {
            bool hit = false;
            for (int e : s)
                if (std::binary_search(hitting.begin(), hitting.end(), e)) {
                    hit = true;
                    break;
                }
            if (!hit)
                return false;
        }
        return true;
    });
}

int min_vertex_cover_size(const Graph& graph) {
    auto cover = solve_vertex_cover(graph, graph.num_vertices);
    return static_cast<int>(cover->size());
}

int min_hitting_set_size(const HittingSetInstance& instance) {
    auto hitting = solve_hitting_set(instance, instance.universe);
    if (!hitting)
        throw std::invalid_argument("hitting-set instance contains an empty block");
    return static_cast<int>(hitting->size());
}

NonHellyWitness make_non_helly_witness(Language language) {
    if (language.size() < 2)
        throw std::invalid_argument("a non-Helly witness needs at least two relations");
    int arity = language.relations().front().arity();
    for (const Relation& r : language.relations())
        if (r.arity() != arity)
            throw std::invalid_argument("non-Helly witnesses with mixed arities are unsupported");
    return {language, arity, language.domain_size()};
}

bool validate_non_helly_witness(const NonHellyWitness& witness, const ClassExpr& expr, const Limits& limits) {
    const auto& relations = witness.language.relations();
    if (relations.size() < 2)
        return false;
    if (member_bool(expr, witness.language, limits))
        return false;
    // Every proper sublanguage must be a member; by heredity it is enough to
    // check the sublanguages dropping exactly one relation.
    for (std::size_t skip = 0; skip < relations.size(); ++skip) {
        std::vector<Relation> rest;
        for (std::size_t i = 0; i < relations.size(); ++i)
            if (i != skip)
                rest.push_back(relations[i]);
        if (!member_bool(expr, Language(witness.language.domain_size(), std::move(rest)), limits))
            return false;
    }
    return true;
}

WitnessSearchResult find_non_helly_witness(const ClassExpr& expr, int arity_cap, int domain_cap, int size_cap,
                                           const Limits& limits) {
    std::int64_t examined = 0;
    try {
        for (int size = 2; size <= size_cap; ++size) {
            for (int d = 1; d <= domain_cap; ++d) {
                for (int arity = 1; arity <= arity_cap; ++arity) {
                    std::int64_t tuple_space = 1;
                    for (int i = 0; i < arity; ++i)
                        tuple_space *= d;
                    if (tuple_space > 20)
                        throw ResourceLimitError("witness search tuple space too large");

                    // All tuples of this shape in lexicographic order; a
                    // relation is a bitmask over them.
                    std::vector<Tuple> universe;
                    Tuple t(arity, 0);
                    while (true) {
                        universe.push_back(t);
                        int pos = arity - 1;
                        while (pos >= 0 && t[pos] == d - 1)
                            t[pos--] = 0;
                        if (pos < 0)
                            break;
                        ++t[pos];
                    }
                    const std::uint64_t masks = std::uint64_t{1} << universe.size();

                    // Relations whose singleton language is a member can take
                    // part in a witness.
                    std::vector<std::uint64_t> parts;
                    std::vector<Language> part_language;
                    for (std::uint64_t mask = 1; mask < masks; ++mask) {
                        if (++examined > limits.witness_language_budget)
                            throw ResourceLimitError("witness search exceeded its language budget");
                        std::vector<Tuple> rows;
                        for (std::size_t bit = 0; bit < universe.size(); ++bit)
                            if (mask >> bit & 1)
                                rows.push_back(universe[bit]);
                        Language single(d, {Relation(arity, d, rows)});
                        if (member_bool(expr, single, limits)) {
                            parts.push_back(mask);
                            part_language.push_back(std::move(single));
                        }
                    }

                    const int n = static_cast<int>(parts.size());
                    if (n < size)
                        continue;
                    std::vector<int> combo(size);
                    for (int i = 0; i < size; ++i)
                        combo[i] = i;
                    while (true) {
                        if (++examined > limits.witness_language_budget)
                            throw ResourceLimitError("witness search exceeded its language budget");
                        std::vector<Relation> rels;
                        for (int idx : combo)
                            rels.push_back(part_language[idx].relations().front());
                        Language candidate(d, std::move(rels));
                        if (candidate.size() == size) {
                            NonHellyWitness witness = make_non_helly_witness(candidate);
                            if (validate_non_helly_witness(witness, expr, limits))
                                return {witness, false};
                        }
                        if (!next_combination(combo, n))
                            break;
                    }
                }
            }
        }
    } catch (const ResourceLimitError&) {
        return {std::nullopt, true};
    }
    return {std::nullopt, false};
}

CspInstance gen_vertex_cover_csp(const Graph& graph, const ClassExpr& expr, const Limits& limits) {
    if (!is_idempotent_class(expr))
        throw std::invalid_argument("the vertex-cover construction needs an idempotent class");

    const int d = 4; // values 1..3, value 0 unused but valid
    Language unary_pairs(d, {Relation(1, d, {{1}, {2}}), Relation(1, d, {{2}, {3}}), Relation(1, d, {{1}, {3}})});

    std::vector<Constraint> constraints;
    if (member_bool(expr, unary_pairs, limits)) {
        std::vector<Tuple> rows;
        for (Value a = 1; a <= 3; ++a)
            for (Value b = 1; b <= 3; ++b)
                if (a != b)
                    rows.push_back({a, b});
        Relation neq(2, d, rows);
        for (const auto& [a, b] : graph.edges)
            constraints.push_back({{a, b}, neq});
    } else {
        Relation r1(2, d, {{1, 1}, {2, 2}});
        Relation r2(2, d, {{2, 2}, {3, 3}});
        Relation r3(2, d, {{1, 1}, {3, 3}});
        for (const auto& [a, b] : graph.edges) {
            constraints.push_back({{a, b}, r1});
            constraints.push_back({{a, b}, r2});
            constraints.push_back({{a, b}, r3});
        }
    }
    return CspInstance(graph.num_vertices, d, std::move(constraints));
}

namespace {

// Every Boolean relation of arity 1 or 2, as one language over {0,1}.
Language all_boolean_binary_language() {
    std::vector<Relation> rels;
    std::vector<Tuple> unary_universe = {{0}, {1}};
    for (std::uint64_t mask = 0; mask < 4; ++mask) {
        std::vector<Tuple> rows;
        for (int bit = 0; bit < 2; ++bit)
            if (mask >> bit & 1)
                rows.push_back(unary_universe[bit]);
        rels.push_back(Relation(1, 2, rows));
    }
    std::vector<Tuple> binary_universe = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        std::vector<Tuple> rows;
        for (int bit = 0; bit < 4; ++bit)
            if (mask >> bit & 1)
                rows.push_back(binary_universe[bit]);
        rels.push_back(Relation(2, 2, rows));
    }
    return Language(2, std::move(rels));
}

} // namespace

CspInstance gen_boolean_csp(const std::variant<Graph, HittingSetInstance>& input, const ClassExpr& expr,
                            const Limits& limits) {
    if (!is_idempotent_class(expr))
        throw std::invalid_argument("the Boolean construction needs an idempotent class");

    const bool all_binary_member = member_bool(expr, all_boolean_binary_language(), limits);

    if (all_binary_member) {
        const auto* hs = std::get_if<HittingSetInstance>(&input);
        if (!hs)
            throw std::invalid_argument("this class needs a hitting-set input (every binary Boolean "
                                        "language is a member, so the edge encoding is trivial)");
        if (hs->p != 3 && !hs->sets.empty())
            throw std::invalid_argument("the Boolean construction needs 3-element sets");

        bool single_flip_member = member_bool(expr, Language(2, {Relation(2, 2, {{1, 0}, {0, 1}})}), limits);
        Relation gadget = single_flip_member ? Relation(3, 2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})
                                             : Relation(3, 2, {{1, 0, 0}, {0, 1, 1}});
        std::vector<Constraint> constraints;
        for (const auto& s : hs->sets)
            constraints.push_back({s, gadget});
        return CspInstance(hs->universe, 2, std::move(constraints));
    }

    const auto* graph = std::get_if<Graph>(&input);
    if (!graph)
        throw std::invalid_argument("this class needs a graph input (some binary Boolean language "
                                    "is a non-member, so the vertex-cover encoding applies)");

    Language single_tuple(2, {Relation(2, 2, {{0, 1}})});
    std::vector<Constraint> constraints;
    if (!member_bool(expr, single_tuple, limits)) {
        Relation edge_relation(2, 2, {{0, 1}});
        for (const auto& [a, b] : graph->edges)
            constraints.push_back({{a, b}, edge_relation});
    } else {
        // The full arity<=2 Boolean language is a non-member here; place its
        // binary relations on every edge and its unary ones on every covered
        // vertex.
        Language full = all_boolean_binary_language();
        std::set<int> touched;
        for (const auto& [a, b] : graph->edges) {
            for (const Relation& r : full.relations())
                if (r.arity() == 2)
                    constraints.push_back({{a, b}, r});
            touched.insert(a);
            touched.insert(b);
        }
        for (int v : touched)
            for (const Relation& r : full.relations())
                if (r.arity() == 1)
                    constraints.push_back({{v}, r});
    }
    return CspInstance(graph->num_vertices, 2, std::move(constraints));
}

CspInstance gen_single_constraint_csp(const HittingSetInstance& input, const std::vector<bool>& class_flags) {
    if (class_flags.size() != input.sets.size())
        throw std::invalid_argument("one class flag per set is required");
    if (input.sets.empty())
        return CspInstance(input.universe, 2, {});

    HittingSetInstance padded = pad_hitting_set(input, std::max(input.p, 3));
    const int n = padded.universe;
    const int s = static_cast<int>(padded.sets.size());
    const int d = 2 * s + 2;

    std::vector<Tuple> rows;
    for (int j = 0; j < s; ++j) {
        const Value e = 2 * (j + 1);
        Relation block = gadget_relation(class_flags[j] ? GadgetKind::ThreeRow : GadgetKind::TwoRow, padded.p, e);
        for (const Tuple& gadget_row : block.tuples()) {
            Tuple row(n, e);
            for (int i = 0; i < padded.p; ++i)
                row[padded.sets[j][i]] = gadget_row[i];
            rows.push_back(std::move(row));
        }
    }

    std::vector<int> scope(n);
    for (int i = 0; i < n; ++i)
        scope[i] = i;
    return CspInstance(n, d, {{std::move(scope), Relation(n, d, rows)}});
}

std::vector<bool> single_constraint_flags(const HittingSetInstance& input, const ClassExpr& expr,
                                          const Limits& limits) {
    std::vector<bool> flags;
    flags.reserve(input.sets.size());
    for (std::size_t j = 0; j < input.sets.size(); ++j) {
        const int e = 2 * (static_cast<int>(j) + 1);
        Relation gadget = gadget_relation(GadgetKind::TwoRow, 2, e);
        flags.push_back(member_bool(expr, Language(gadget.domain_size(), {gadget}), limits));
    }
    return flags;
}

CspInstance gen_boolean_uniform_csp(const HittingSetInstance& input, const ClassExpr& expr, const Limits& limits) {
    if (input.sets.empty())
        return CspInstance(input.universe, 2, {});
    HittingSetInstance padded = pad_hitting_set(input, std::max(input.p, 3));

    Relation two_row = gadget_relation(GadgetKind::TwoRow, padded.p, 0);
    bool two_row_member = member_bool(expr, Language(2, {two_row}), limits);
    Relation gadget = two_row_member ? gadget_relation(GadgetKind::ThreeRow, padded.p, 0) : two_row;

    std::vector<Constraint> constraints;
    constraints.reserve(padded.sets.size());
    for (const auto& s : padded.sets)
        constraints.push_back({s, gadget});
    return CspInstance(padded.universe, 2, std::move(constraints));
}

CspInstance gen_renaming_chain_csp(const HittingSetInstance& input, const NonHellyWitness& witness,
                                   const ClassExpr& expr, const Limits& limits) {
    if (!validate_non_helly_witness(witness, expr, limits))
        throw std::invalid_argument("the witness failed re-validation against the class");

    const int n = input.universe;
    const int s = static_cast<int>(input.sets.size());
    if (s == 0)
        return CspInstance(n, 1, {});

    const int p = input.p;
    const int r = witness.arity;
    const std::vector<Value> base_values = active_domain(witness.language);
    const int block = static_cast<int>(base_values.size());

    // Variables: the n element variables first, then per set a block of the
    // chain's endpoint variables y_1..y_r, z_1..z_r.
    const int total_vars = n + 2 * r * s;
    auto y_var = [&](int set, int i) { return n + set * 2 * r + i; };
    auto z_var = [&](int set, int i) { return n + set * 2 * r + r + i; };

    // Fresh value blocks: per set, p+2 disjoint domains of the witness's
    // active size, allocated in set order then chain order.
    const int total_values = s * (p + 2) * block;
    auto fresh_domain = [&](int set, int level) {
        std::map<Value, Value> forward;
        const int offset = (set * (p + 2) + level) * block;
        for (int i = 0; i < block; ++i)
            forward[offset + i] = offset + block + i; // shift to the next level
        return BijectionMap(forward);
    };
    auto embed = [&](int set, int level) {
        std::map<Value, Value> forward;
        const int offset = (set * (p + 2) + level) * block;
        for (int i = 0; i < block; ++i)
            forward[base_values[i]] = offset + i;
        return BijectionMap(forward);
    };

    const auto& relations = witness.language.relations();
    std::vector<Constraint> constraints;
    for (int j = 0; j < s; ++j) {
        // Chain variables in order: y_r, x_{sigma(1)}, ..., x_{sigma(p)}, z_1.
        std::vector<int> chain;
        chain.push_back(y_var(j, r - 1));
        for (int e : input.sets[j])
            chain.push_back(e);
        chain.push_back(z_var(j, 0));

        for (int i = 0; i <= p; ++i) {
            Relation link = bijection_relation(fresh_domain(j, i));
            constraints.push_back({{chain[i], chain[i + 1]}, Relation(2, total_values, link.tuples())});
        }

        // First witness relation on the y block, renamed into level 0.
        Language first(witness.domain_size, {relations.front()});
        Language renamed_first = rename_language(first, embed(j, 0));
        std::vector<int> y_scope(r);
        for (int i = 0; i < r; ++i)
            y_scope[i] = y_var(j, i);
        constraints.push_back(
            {y_scope, Relation(r, total_values, renamed_first.relations().front().tuples())});

        // Remaining witness relations on the z block, renamed into the last level.
        std::vector<int> z_scope(r);
        for (int i = 0; i < r; ++i)
            z_scope[i] = z_var(j, i);
        for (std::size_t rest = 1; rest < relations.size(); ++rest) {
            Language tail(witness.domain_size, {relations[rest]});
            Language renamed_tail = rename_language(tail, embed(j, p + 1));
            constraints.push_back(
                {z_scope, Relation(r, total_values, renamed_tail.relations().front().tuples())});
        }
    }
    return CspInstance(total_vars, total_values, std::move(constraints));
}

} // namespace cspbd
