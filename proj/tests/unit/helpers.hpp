#pragma once

#include "cspbd/instance.hpp"
#include "cspbd/language.hpp"
#include "cspbd/relation.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace testutil {

using namespace cspbd;

// Small deterministic generator so property-style tests are reproducible.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

inline Relation rel(int arity, int domain, std::vector<Tuple> rows) {
    return Relation(arity, domain, rows);
}

inline Relation random_relation(Rng& rng, int arity, int domain, int max_tuples) {
    int count = rng.below(max_tuples + 1);
    std::vector<Tuple> rows;
    for (int i = 0; i < count; ++i) {
        Tuple t(arity);
        for (int j = 0; j < arity; ++j)
            t[j] = rng.below(domain);
        rows.push_back(std::move(t));
    }
    return Relation(arity, domain, rows);
}

inline Language random_language(Rng& rng, int domain, int max_relations, int max_arity, int max_tuples) {
    int count = rng.below(max_relations + 1);
    std::vector<Relation> rels;
    for (int i = 0; i < count; ++i)
        rels.push_back(random_relation(rng, 1 + rng.below(max_arity), domain, max_tuples));
    return Language(domain, std::move(rels));
}

inline CspInstance random_instance(Rng& rng, int max_vars, int max_domain, int max_constraints, int max_arity,
                                   int max_tuples) {
    int n = 1 + rng.below(max_vars);
    int d = 1 + rng.below(max_domain);
    int m = rng.below(max_constraints + 1);
    std::vector<Constraint> constraints;
    for (int c = 0; c < m; ++c) {
        int arity = 1 + rng.below(std::min(max_arity, n));
        std::vector<int> scope;
        while (static_cast<int>(scope.size()) < arity) {
            int v = rng.below(n);
            bool dup = false;
            for (int s : scope)
                if (s == v)
                    dup = true;
            if (!dup)
                scope.push_back(v);
        }
        constraints.push_back({scope, random_relation(rng, arity, d, max_tuples)});
    }
    return CspInstance(n, d, std::move(constraints));
}

// Independent satisfiability oracle: plain enumeration of all assignments.
inline std::optional<std::vector<Value>> brute_force_solve(const CspInstance& instance) {
    std::vector<Value> assignment(instance.num_vars(), 0);
    while (true) {
        bool ok = true;
        for (const Constraint& c : instance.constraints()) {
            Tuple picked;
            picked.reserve(c.scope.size());
            for (int v : c.scope)
                picked.push_back(assignment[v]);
            if (!c.relation.contains(picked)) {
                ok = false;
                break;
            }
        }
        if (ok)
            return assignment;
        int pos = instance.num_vars() - 1;
        while (pos >= 0 && assignment[pos] == instance.domain_size() - 1)
            assignment[pos--] = 0;
        if (pos < 0)
            return std::nullopt;
        ++assignment[pos];
    }
}

} // namespace testutil
