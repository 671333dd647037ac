#include "cspbd/set_function.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace cspbd {

SetFunction::SetFunction(int domain_size, std::map<std::uint64_t, Value> pinned)
    : domain_size_(domain_size), pinned_(std::move(pinned)) {
    if (domain_size_ < 0 || domain_size_ > 64)
        throw std::invalid_argument("set function domain must fit in a 64-bit mask");
    for (const auto& [mask, value] : pinned_) {
        if (mask == 0)
            throw std::invalid_argument("set function is defined on nonempty sets only");
        if (value < 0 || value >= domain_size_)
            throw std::invalid_argument("set function value out of domain");
        if (std::popcount(mask) == 1 && static_cast<Value>(std::countr_zero(mask)) != value)
            throw std::invalid_argument("set function must be idempotent on singletons");
    }
}

Value SetFunction::value_of(std::uint64_t set_mask) const {
    if (set_mask == 0)
        throw std::invalid_argument("set function applied to the empty set");
    auto it = pinned_.find(set_mask);
    if (it != pinned_.end())
        return it->second;
    return static_cast<Value>(std::countr_zero(set_mask));
}

namespace {

// One column-set condition: the values chosen for the masks must combine to a
// tuple of the relation. Masks may repeat across columns.
struct Requirement {
    const Relation* relation;
    std::vector<std::uint64_t> column_masks;
};

struct RequirementBuild {
    std::vector<Requirement> requirements;
    std::vector<std::uint64_t> variables; // distinct masks, ascending
};

std::int64_t subsets_up_to(int n, int max_size) {
    std::int64_t total = 0, comb = 1;
    for (int s = 1; s <= std::min(n, max_size); ++s) {
        comb = comb * (n - s + 1) / s;
        total += comb;
        if (total > (std::int64_t{1} << 40))
            return total;
    }
    return total;
}

RequirementBuild collect_requirements(const Language& language, int domain_limit, const Limits& limits) {
    RequirementBuild build;
    std::set<std::uint64_t> variable_set;

    for (const Relation& rel : language.relations()) {
        const int t = rel.tuple_count();
        const int r = rel.arity();
        if (t == 0 || r == 0)
            continue; // nothing to constrain
        if (t > limits.tsi_tuple_cap)
            throw ResourceLimitError("relation tuple count exceeds the tsi cap");
        if (subsets_up_to(t, domain_limit) > limits.tsi_subset_budget)
            throw ResourceLimitError("tsi subset enumeration exceeds its budget");

        std::set<std::vector<std::uint64_t>> seen;
        const int max_size = std::min(t, domain_limit);
        std::vector<int> combo;
        // Enumerate tuple subsets by size, lexicographic within a size.
        auto emit = [&](const std::vector<int>& rows) {
            std::vector<std::uint64_t> masks(r, 0);
            for (int row : rows) {
                auto tuple = rel.row(row);
                for (int j = 0; j < r; ++j)
                    masks[j] |= std::uint64_t{1} << tuple[j];
            }
            if (rows.size() == 1)
                return; // a single row maps to itself
            if (seen.insert(masks).second) {
                build.requirements.push_back({&rel, masks});
                for (std::uint64_t m : masks)
                    variable_set.insert(m);
            }
        };
        for (int size = 1; size <= max_size; ++size) {
            combo.assign(size, 0);
            for (int i = 0; i < size; ++i)
                combo[i] = i;
            while (true) {
                emit(combo);
                int i = size - 1;
                while (i >= 0 && combo[i] == t - size + i)
                    --i;
                if (i < 0)
                    break;
                ++combo[i];
                for (int j = i + 1; j < size; ++j)
                    combo[j] = combo[j - 1] + 1;
            }
        }
        // Singleton column sets still participate in other requirements.
        for (int row = 0; row < t; ++row) {
            auto tuple = rel.row(row);
            for (int j = 0; j < r; ++j)
                variable_set.insert(std::uint64_t{1} << tuple[j]);
        }
    }

    build.variables.assign(variable_set.begin(), variable_set.end());
    return build;
}

// Arc-consistency based solver over the column-set variables. Candidate sets
// are value bitmasks; singletons are pinned to their value up front.
struct TsiSolver {
    const std::vector<Requirement>& requirements;
    std::vector<std::uint64_t> variables;
    std::map<std::uint64_t, int> variable_index;
    std::vector<std::uint64_t> candidates;
    std::vector<std::vector<int>> requirements_of_variable;
    std::int64_t steps = 0;
    std::int64_t budget;

    TsiSolver(const RequirementBuild& build, std::uint64_t active_mask, std::int64_t step_budget)
        : requirements(build.requirements), variables(build.variables), budget(step_budget) {
        for (std::size_t i = 0; i < variables.size(); ++i)
            variable_index[variables[i]] = static_cast<int>(i);
        candidates.assign(variables.size(), 0);
        for (std::size_t i = 0; i < variables.size(); ++i)
            candidates[i] = std::popcount(variables[i]) == 1 ? variables[i] : active_mask;
        requirements_of_variable.assign(variables.size(), {});
        for (std::size_t ri = 0; ri < requirements.size(); ++ri) {
            std::set<int> vars;
            for (std::uint64_t m : requirements[ri].column_masks)
                vars.insert(variable_index.at(m));
            for (int v : vars)
                requirements_of_variable[v].push_back(static_cast<int>(ri));
        }
    }

    void charge(std::int64_t amount) {
        steps += amount;
        if (steps > budget)
            throw ResourceLimitError("tsi membership search exceeded its step budget");
    }

    // Removes unsupported values of every variable of the requirement.
    // Returns false on a wipeout; `changed` collects narrowed variables.
    bool revise(int ri, std::vector<int>& changed) {
        const Requirement& req = requirements[ri];
        const Relation& rel = *req.relation;
        const int r = rel.arity();
        std::vector<int> vars(r);
        for (int j = 0; j < r; ++j)
            vars[j] = variable_index.at(req.column_masks[j]);

        std::set<int> distinct(vars.begin(), vars.end());
        std::map<int, Value> chosen;
        for (int var : distinct) {
            std::uint64_t supported = 0;
            std::uint64_t current = candidates[var];
            for (int row = 0; row < rel.tuple_count(); ++row) {
                charge(1);
                auto tuple = rel.row(row);
                bool feasible = true;
                chosen.clear();
                for (int j = 0; j < r && feasible; ++j) {
                    if (!(candidates[vars[j]] >> tuple[j] & 1)) {
                        feasible = false;
                        break;
                    }
                    // Repeated variables in the scope must take one value.
                    auto [it, inserted] = chosen.emplace(vars[j], tuple[j]);
                    if (!inserted && it->second != tuple[j])
                        feasible = false;
                }
                if (feasible)
                    supported |= std::uint64_t{1} << chosen.at(var);
            }
            std::uint64_t narrowed = current & supported;
            if (narrowed != current) {
                candidates[var] = narrowed;
                if (narrowed == 0)
                    return false;
                changed.push_back(var);
            }
        }
        return true;
    }

    bool propagate(std::vector<int> dirty_requirements) {
        std::set<int> queue(dirty_requirements.begin(), dirty_requirements.end());
        while (!queue.empty()) {
            int ri = *queue.begin();
            queue.erase(queue.begin());
            std::vector<int> changed;
            if (!revise(ri, changed))
                return false;
            for (int var : changed)
                for (int other : requirements_of_variable[var])
                    queue.insert(other);
        }
        return true;
    }

    bool search() {
        std::vector<int> all(requirements.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = static_cast<int>(i);
        if (!propagate(all))
            return false;
        return branch();
    }

    bool branch() {
        int var = -1;
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (std::popcount(candidates[i]) > 1) {
                var = static_cast<int>(i);
                break;
            }
        if (var < 0)
            return true;
        std::uint64_t options = candidates[var];
        std::vector<std::uint64_t> saved = candidates;
        for (int v = 0; v < 64; ++v) {
            if (!(options >> v & 1))
                continue;
            charge(1);
            candidates[var] = std::uint64_t{1} << v;
            if (propagate(requirements_of_variable[var]) && branch())
                return true;
            candidates = saved;
        }
        return false;
    }
};

} // namespace

std::optional<SetFunction> tsi_member(const Language& language, const Limits& limits) {
    std::vector<Value> active = active_domain(language);
    if (active.empty())
        return SetFunction(0); // trivially a member

    if (static_cast<int>(active.size()) > limits.tsi_domain_cap)
        throw ResourceLimitError("active domain exceeds the tsi domain cap");
    if (active.back() >= 64)
        throw ResourceLimitError("tsi membership needs domain values below 64");

    RequirementBuild build = collect_requirements(language, static_cast<int>(active.size()), limits);
    std::uint64_t active_mask = 0;
    for (Value v : active)
        active_mask |= std::uint64_t{1} << v;

    TsiSolver solver(build, active_mask, limits.search_step_budget);
    if (!solver.search())
        return std::nullopt;

    std::map<std::uint64_t, Value> pinned;
    for (Value v : active)
        pinned[std::uint64_t{1} << v] = v;
    for (std::size_t i = 0; i < solver.variables.size(); ++i)
        pinned[solver.variables[i]] = static_cast<Value>(std::countr_zero(solver.candidates[i]));
    return SetFunction(active.back() + 1, std::move(pinned));
}

bool verify_tsi(const SetFunction& f, const Language& language, const Limits& limits) {
    std::vector<Value> active = active_domain(language);
    if (active.empty())
        return true;
    if (active.back() >= f.domain_size())
        return false;
    for (Value v : active)
        if (f.value_of(std::uint64_t{1} << v) != v)
            return false;

    RequirementBuild build = collect_requirements(language, static_cast<int>(active.size()), limits);
    Tuple image;
    for (const Requirement& req : build.requirements) {
        image.clear();
        for (std::uint64_t mask : req.column_masks)
            image.push_back(f.value_of(mask));
        if (!req.relation->contains(image))
            return false;
    }
    return true;
}

} // namespace cspbd
