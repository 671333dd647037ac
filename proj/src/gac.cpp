#include "cspbd/gac.hpp"

#include "cspbd/backdoor.hpp"

#include <algorithm>
#include <stdexcept>

namespace cspbd {

namespace {

// In-place filtering to the GAC fixpoint; false on wipeout.
bool gac_filter(const CspInstance& instance, std::vector<std::vector<Value>>& domains) {
    for (const Constraint& c : instance.constraints())
        if (c.relation.tuple_count() == 0)
            return false; // includes the violated nullary relation

    bool changed = true;
    while (changed) {
        changed = false;
        for (const Constraint& c : instance.constraints()) {
            const int r = c.relation.arity();
            for (int pos = 0; pos < r; ++pos) {
                std::vector<Value>& domain = domains[c.scope[pos]];
                auto unsupported = [&](Value v) {
                    for (int row = 0; row < c.relation.tuple_count(); ++row) {
                        auto tuple = c.relation.row(row);
                        if (tuple[pos] != v)
                            continue;
                        bool ok = true;
                        for (int j = 0; j < r && ok; ++j)
                            ok = std::binary_search(domains[c.scope[j]].begin(), domains[c.scope[j]].end(), tuple[j]);
                        if (ok)
                            return false;
                    }
                    return true;
                };
                auto removed = std::remove_if(domain.begin(), domain.end(), unsupported);
                if (removed != domain.end()) {
                    domain.erase(removed, domain.end());
                    changed = true;
                    if (domain.empty())
                        return false;
                }
            }
        }
    }
    return true;
}

bool solve_rec(const CspInstance& instance, std::vector<std::vector<Value>>& domains) {
    int var = -1;
    for (int v = 0; v < instance.num_vars(); ++v)
        if (domains[v].size() > 1) {
            var = v;
            break;
        }
    if (var < 0)
        return true; // all singleton and GAC-consistent, hence a solution

    std::vector<Value> options = domains[var];
    for (Value v : options) {
        std::vector<std::vector<Value>> saved = domains;
        domains[var] = {v};
        if (gac_filter(instance, domains) && solve_rec(instance, domains))
            return true;
        domains = std::move(saved);
    }
    return false;
}

} // namespace

std::optional<std::vector<std::vector<Value>>> enforce_gac(const CspInstance& instance) {
    std::vector<std::vector<Value>> domains(instance.num_vars());
    for (int v = 0; v < instance.num_vars(); ++v) {
        domains[v].resize(instance.domain_size());
        for (Value d = 0; d < instance.domain_size(); ++d)
            domains[v][d] = d;
    }
    if (!gac_filter(instance, domains))
        return std::nullopt;
    return domains;
}

std::optional<std::vector<Value>> solve_instance(const CspInstance& instance) {
    auto domains = enforce_gac(instance);
    if (!domains)
        return std::nullopt;
    if (!solve_rec(instance, *domains))
        return std::nullopt;
    std::vector<Value> solution(instance.num_vars());
    for (int v = 0; v < instance.num_vars(); ++v)
        solution[v] = (*domains)[v][0];
    return solution;
}

std::optional<std::vector<Value>> solve_via_backdoor(const CspInstance& instance, const std::vector<int>& backdoor,
                                                     const ClassExpr& expr, const Limits& limits) {
    if (!check_backdoor_naive(instance, backdoor, expr, limits))
        throw std::invalid_argument("the given variable set is not a strong backdoor");

    std::vector<int> vars = backdoor;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    std::vector<Value> values(vars.size(), 0);
    while (true) {
        PartialAssignment assignment;
        for (std::size_t i = 0; i < vars.size(); ++i)
            assignment[vars[i]] = values[i];
        ReducedInstance reduced = apply_assignment_tracked(instance, assignment);
        if (auto residual_solution = solve_instance(reduced.instance)) {
            std::vector<Value> full(instance.num_vars(), 0);
            for (const auto& [var, val] : assignment)
                full[var] = val;
            for (std::size_t i = 0; i < reduced.kept_vars.size(); ++i)
                full[reduced.kept_vars[i]] = (*residual_solution)[i];
            return full;
        }
        int pos = static_cast<int>(values.size()) - 1;
        while (pos >= 0 && values[pos] == instance.domain_size() - 1)
            values[pos--] = 0;
        if (pos < 0)
            break;
        ++values[pos];
    }
    return std::nullopt;
}

} // namespace cspbd
