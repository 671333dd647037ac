#include "cspbd/backdoor.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cspbd {

namespace {

std::vector<int> sorted_unique(std::vector<int> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

void validate_backdoor_vars(const CspInstance& instance, const std::vector<int>& backdoor) {
    for (int v : backdoor)
        if (v < 0 || v >= instance.num_vars())
            throw std::invalid_argument("backdoor variable out of range");
}

// Saturating d^k.
std::int64_t pow_saturated(std::int64_t base, int exp, std::int64_t cap) {
    std::int64_t result = 1;
    for (int i = 0; i < exp; ++i) {
        if (result > cap / std::max<std::int64_t>(base, 1))
            return cap + 1;
        result *= base;
    }
    return result;
}

std::vector<int> language_key(const Language& language) {
    std::vector<int> key;
    for (const Relation& r : language.relations()) {
        key.push_back(r.arity());
        key.push_back(r.tuple_count());
        for (int i = 0; i < r.tuple_count(); ++i) {
            auto row = r.row(i);
            key.insert(key.end(), row.begin(), row.end());
        }
        key.push_back(-1);
    }
    return key;
}

} // namespace

bool MembershipCache::member(const Language& language, DetectStats* stats) {
    if (stats)
        ++stats->membership_tests;
    std::vector<int> key = language_key(language);
    auto it = results_.find(key);
    if (it == results_.end()) {
        int outcome;
        try {
            outcome = member_bool(*expr_, language, limits_) ? 1 : 0;
        } catch (const ResourceLimitError&) {
            results_.emplace(std::move(key), 2);
            throw;
        }
        it = results_.emplace(std::move(key), outcome).first;
    }
    if (it->second == 2)
        throw ResourceLimitError("membership test exceeded a resource cap (cached)");
    return it->second == 1;
}

bool check_backdoor_naive(const CspInstance& instance, const std::vector<int>& backdoor, MembershipCache& cache,
                          const Limits& limits, DetectStats* stats) {
    validate_backdoor_vars(instance, backdoor);
    std::vector<int> vars = sorted_unique(backdoor);

    std::int64_t total = pow_saturated(instance.domain_size(), static_cast<int>(vars.size()),
                                       limits.naive_assignment_budget);
    if (total > limits.naive_assignment_budget)
        throw ResourceLimitError("naive backdoor check exceeds its assignment budget");

    std::vector<Value> values(vars.size(), 0);
    while (true) {
        PartialAssignment assignment;
        for (std::size_t i = 0; i < vars.size(); ++i)
            assignment[vars[i]] = values[i];
        if (!cache.member(residual_language(apply_assignment(instance, assignment)), stats))
            return false;
        int pos = static_cast<int>(values.size()) - 1;
        while (pos >= 0 && values[pos] == instance.domain_size() - 1)
            values[pos--] = 0;
        if (pos < 0)
            break;
        ++values[pos];
    }
    return true;
}

bool check_backdoor_naive(const CspInstance& instance, const std::vector<int>& backdoor, const ClassExpr& expr,
                          const Limits& limits, DetectStats* stats) {
    MembershipCache cache(expr, limits);
    return check_backdoor_naive(instance, backdoor, cache, limits, stats);
}

std::vector<LocalAssignmentEntry> local_assignments(const Constraint& constraint, const std::vector<int>& backdoor) {
    std::vector<int> vars = sorted_unique(backdoor);
    std::vector<int> fixed_positions;
    for (int pos = 0; pos < static_cast<int>(constraint.scope.size()); ++pos)
        if (std::binary_search(vars.begin(), vars.end(), constraint.scope[pos]))
            fixed_positions.push_back(pos);
    // Keep ascending variable order for the recursive splitting.
    std::sort(fixed_positions.begin(), fixed_positions.end(),
              [&](int a, int b) { return constraint.scope[a] < constraint.scope[b]; });

    std::vector<int> free_positions;
    for (int pos = 0; pos < static_cast<int>(constraint.scope.size()); ++pos)
        if (!std::binary_search(vars.begin(), vars.end(), constraint.scope[pos]))
            free_positions.push_back(pos);

    const Relation& rel = constraint.relation;
    std::vector<LocalAssignmentEntry> entries;

    std::vector<int> all_rows(rel.tuple_count());
    for (int i = 0; i < rel.tuple_count(); ++i)
        all_rows[i] = i;

    // Depth-first split: fix the next backdoor position to each value present
    // in the surviving rows, ascending, so the output order is deterministic.
    auto split = [&](auto&& self, const std::vector<int>& rows, std::size_t depth,
                     PartialAssignment& assignment) -> void {
        if (rows.empty())
            return;
        if (depth == fixed_positions.size()) {
            std::vector<Tuple> projected;
            projected.reserve(rows.size());
            for (int row : rows) {
                auto tuple = rel.row(row);
                Tuple p;
                p.reserve(free_positions.size());
                for (int pos : free_positions)
                    p.push_back(tuple[pos]);
                projected.push_back(std::move(p));
            }
            entries.push_back({assignment, Relation(static_cast<int>(free_positions.size()), rel.domain_size(),
                                                    projected)});
            return;
        }
        int pos = fixed_positions[depth];
        std::set<Value> present;
        for (int row : rows)
            present.insert(rel.row(row)[pos]);
        for (Value v : present) {
            std::vector<int> kept;
            for (int row : rows)
                if (rel.row(row)[pos] == v)
                    kept.push_back(row);
            assignment[constraint.scope[pos]] = v;
            self(self, kept, depth + 1, assignment);
            assignment.erase(constraint.scope[pos]);
        }
    };

    PartialAssignment assignment;
    split(split, all_rows, 0, assignment);
    return entries;
}

namespace {

bool factored_check_impl(const std::vector<const std::vector<LocalAssignmentEntry>*>& entries, int domain_size,
                         MembershipCache& cache, const Limits& limits, DetectStats* stats) {
    const int m = static_cast<int>(entries.size());
    if (m >= 62)
        throw ResourceLimitError("factored backdoor check limited to fewer than 62 constraints");

    std::int64_t work = 1;
    for (const auto* list : entries) {
        std::int64_t factor = 1 + static_cast<std::int64_t>(list->size());
        if (work > limits.factored_product_budget / factor)
            throw ResourceLimitError("factored backdoor check exceeds its product budget");
        work *= factor;
    }

    // Every constraint subset, then every combination of one local assignment
    // per selected constraint. Consistent combinations induce the language of
    // the surviving subrelations, which must be a member.
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<int> selected;
        for (int c = 0; c < m; ++c)
            if (mask >> c & 1)
                selected.push_back(c);

        std::vector<std::size_t> pick(selected.size(), 0);
        bool any_empty = false;
        for (int c : selected)
            if (entries[c]->empty())
                any_empty = true;
        if (any_empty)
            continue; // a constraint with no surviving assignment never degrades

        while (true) {
            PartialAssignment combined;
            bool consistent = true;
            for (std::size_t i = 0; i < selected.size() && consistent; ++i) {
                const LocalAssignmentEntry& entry = (*entries[selected[i]])[pick[i]];
                for (const auto& [var, val] : entry.assignment) {
                    auto [it, inserted] = combined.emplace(var, val);
                    if (!inserted && it->second != val) {
                        consistent = false;
                        break;
                    }
                }
            }
            if (consistent) {
                std::vector<Relation> residuals;
                residuals.reserve(selected.size());
                for (std::size_t i = 0; i < selected.size(); ++i)
                    residuals.push_back((*entries[selected[i]])[pick[i]].residual);
                if (!cache.member(Language(domain_size, std::move(residuals)), stats))
                    return false;
            }
            int pos = static_cast<int>(pick.size()) - 1;
            while (pos >= 0 && pick[pos] + 1 == entries[selected[pos]]->size())
                pick[pos--] = 0;
            if (pos < 0)
                break;
            ++pick[pos];
        }
    }
    return true;
}

} // namespace

bool check_backdoor_factored(const CspInstance& instance, const std::vector<int>& backdoor, MembershipCache& cache,
                             const Limits& limits, DetectStats* stats) {
    validate_backdoor_vars(instance, backdoor);
    std::vector<std::vector<LocalAssignmentEntry>> owned;
    owned.reserve(instance.constraints().size());
    for (const Constraint& c : instance.constraints())
        owned.push_back(local_assignments(c, backdoor));
    std::vector<const std::vector<LocalAssignmentEntry>*> entries;
    entries.reserve(owned.size());
    for (const auto& list : owned)
        entries.push_back(&list);
    return factored_check_impl(entries, instance.domain_size(), cache, limits, stats);
}

bool check_backdoor_factored(const CspInstance& instance, const std::vector<int>& backdoor, const ClassExpr& expr,
                             const Limits& limits, DetectStats* stats) {
    MembershipCache cache(expr, limits);
    return check_backdoor_factored(instance, backdoor, cache, limits, stats);
}

namespace {

// Iterates size-h index combinations in lexicographic order.
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

struct FptSearch {
    const CspInstance* instance;
    MembershipCache* cache;
    const Limits* limits;
    DetectStats* stats;
    int k;
    int h;
    // Local assignments memoized per (constraint index, backdoor within scope).
    std::map<std::pair<int, std::vector<int>>, std::vector<LocalAssignmentEntry>> entry_cache;

    const std::vector<LocalAssignmentEntry>& entries_for(int constraint_index, const std::vector<int>& backdoor) {
        const Constraint& c = instance->constraints()[constraint_index];
        std::vector<int> scoped;
        for (int v : c.scope)
            if (std::binary_search(backdoor.begin(), backdoor.end(), v))
                scoped.push_back(v);
        std::sort(scoped.begin(), scoped.end());
        auto key = std::make_pair(constraint_index, scoped);
        auto it = entry_cache.find(key);
        if (it == entry_cache.end())
            it = entry_cache.emplace(std::move(key), local_assignments(c, backdoor)).first;
        return it->second;
    }

    bool subset_check(const std::vector<int>& combo, const std::vector<int>& backdoor) {
        std::vector<const std::vector<LocalAssignmentEntry>*> entries;
        entries.reserve(combo.size());
        for (int ci : combo)
            entries.push_back(&entries_for(ci, backdoor));
        return factored_check_impl(entries, instance->domain_size(), *cache, *limits, stats);
    }

    std::optional<std::vector<int>> visit(std::vector<int>& backdoor) {
        if (stats)
            ++stats->nodes_expanded;
        const int m = static_cast<int>(instance->constraints().size());
        const int subset_size = std::min(h, m);

        std::optional<std::vector<int>> failing;
        if (m > 0) {
            std::vector<int> combo(subset_size);
            for (int i = 0; i < subset_size; ++i)
                combo[i] = i;
            do {
                if (!subset_check(combo, backdoor)) {
                    failing = combo;
                    break;
                }
            } while (next_combination(combo, m));
        }
        if (!failing)
            return backdoor;
        if (static_cast<int>(backdoor.size()) == k)
            return std::nullopt;

        std::vector<int> candidates;
        for (int ci : *failing)
            for (int v : instance->constraints()[ci].scope)
                candidates.push_back(v);
        candidates = sorted_unique(std::move(candidates));
        for (int v : candidates) {
            if (std::binary_search(backdoor.begin(), backdoor.end(), v))
                continue;
            std::vector<int> child = backdoor;
            child.insert(std::lower_bound(child.begin(), child.end(), v), v);
            if (auto found = visit(child))
                return found;
        }
        return std::nullopt;
    }
};

} // namespace

std::optional<std::vector<int>> find_backdoor_fpt(const BackdoorQuery& query, const Limits& limits,
                                                  DetectStats* stats) {
    if (!query.instance || !query.expr)
        throw std::invalid_argument("backdoor query needs an instance and a class expression");
    if (query.k < 0)
        throw std::invalid_argument("backdoor budget must be nonnegative");
    if (query.helly_number < 1)
        throw std::invalid_argument("the bounded search tree needs a Helly number of at least 1");

    MembershipCache cache(*query.expr, limits);
    FptSearch search{query.instance, &cache, &limits, stats, query.k, query.helly_number, {}};
    std::vector<int> root;
    return search.visit(root);
}

std::optional<std::vector<int>> find_backdoor_bruteforce(const CspInstance& instance, const ClassExpr& expr, int k,
                                                         const Limits& limits, DetectStats* stats) {
    if (k < 0)
        throw std::invalid_argument("backdoor budget must be nonnegative");
    MembershipCache cache(expr, limits);

    std::int64_t work = 0;
    for (int size = 0; size <= std::min(k, instance.num_vars()); ++size) {
        std::vector<int> combo(size);
        for (int i = 0; i < size; ++i)
            combo[i] = i;
        while (true) {
            work += pow_saturated(instance.domain_size(), size, limits.bruteforce_budget);
            if (work > limits.bruteforce_budget)
                throw ResourceLimitError("brute-force backdoor search exceeds its budget");
            if (check_backdoor_naive(instance, combo, cache, limits, stats))
                return combo;
            if (size == 0 || !next_combination(combo, instance.num_vars()))
                break;
        }
    }
    return std::nullopt;
}

} // namespace cspbd
