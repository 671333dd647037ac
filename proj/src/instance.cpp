#include "cspbd/instance.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace cspbd {

CspInstance::CspInstance(int num_vars, int domain_size, std::vector<Constraint> constraints)
    : num_vars_(num_vars), domain_size_(domain_size), constraints_(std::move(constraints)) {
    if (num_vars_ < 0)
        throw std::invalid_argument("instance variable count must be nonnegative");
    if (domain_size_ < 1)
        throw std::invalid_argument("instance domain size must be positive");
    for (const Constraint& c : constraints_) {
        std::set<int> seen;
        for (int v : c.scope) {
            if (v < 0 || v >= num_vars_)
                throw std::invalid_argument("scope variable " + std::to_string(v) + " out of range");
            if (!seen.insert(v).second)
                throw std::invalid_argument("scope repeats variable " + std::to_string(v));
        }
        if (c.relation.arity() != static_cast<int>(c.scope.size()))
            throw std::invalid_argument("relation arity does not match scope size");
        if (c.relation.domain_size() > domain_size_)
            throw std::invalid_argument("relation domain exceeds instance domain");
    }
}

int CspInstance::max_arity() const {
    int r = 0;
    for (const Constraint& c : constraints_)
        r = std::max(r, c.relation.arity());
    return r;
}

int CspInstance::max_tuple_count() const {
    int t = 0;
    for (const Constraint& c : constraints_)
        t = std::max(t, c.relation.tuple_count());
    return t;
}

ReducedInstance apply_assignment_tracked(const CspInstance& instance, const PartialAssignment& assignment) {
    for (const auto& [var, val] : assignment) {
        if (var < 0 || var >= instance.num_vars())
            throw std::invalid_argument("assignment to unknown variable " + std::to_string(var));
        if (val < 0 || val >= instance.domain_size())
            throw std::invalid_argument("assignment value out of domain");
    }

    std::vector<int> kept;
    std::vector<int> new_index(instance.num_vars(), -1);
    for (int v = 0; v < instance.num_vars(); ++v) {
        if (!assignment.count(v)) {
            new_index[v] = static_cast<int>(kept.size());
            kept.push_back(v);
        }
    }

    std::vector<Constraint> reduced;
    reduced.reserve(instance.constraints().size());
    for (const Constraint& c : instance.constraints()) {
        std::vector<int> fixed_positions, free_positions;
        for (int pos = 0; pos < static_cast<int>(c.scope.size()); ++pos) {
            if (assignment.count(c.scope[pos]))
                fixed_positions.push_back(pos);
            else
                free_positions.push_back(pos);
        }
        if (fixed_positions.empty()) {
            std::vector<int> scope;
            scope.reserve(c.scope.size());
            for (int v : c.scope)
                scope.push_back(new_index[v]);
            reduced.push_back({std::move(scope), c.relation});
            continue;
        }

        std::vector<Tuple> rows;
        for (int i = 0; i < c.relation.tuple_count(); ++i) {
            auto r = c.relation.row(i);
            bool match = true;
            for (int pos : fixed_positions)
                if (r[pos] != assignment.at(c.scope[pos])) {
                    match = false;
                    break;
                }
            if (!match)
                continue;
            Tuple projected;
            projected.reserve(free_positions.size());
            for (int pos : free_positions)
                projected.push_back(r[pos]);
            rows.push_back(std::move(projected));
        }
        std::vector<int> scope;
        scope.reserve(free_positions.size());
        for (int pos : free_positions)
            scope.push_back(new_index[c.scope[pos]]);
        reduced.push_back(
            {std::move(scope), Relation(static_cast<int>(free_positions.size()), instance.domain_size(), rows)});
    }

    return {CspInstance(static_cast<int>(kept.size()), instance.domain_size(), std::move(reduced)), std::move(kept)};
}

CspInstance apply_assignment(const CspInstance& instance, const PartialAssignment& assignment) {
    return apply_assignment_tracked(instance, assignment).instance;
}

Language residual_language(const CspInstance& instance) {
    std::vector<Relation> relations;
    relations.reserve(instance.constraints().size());
    for (const Constraint& c : instance.constraints())
        relations.push_back(c.relation);
    return Language(instance.domain_size(), std::move(relations));
}

} // namespace cspbd
