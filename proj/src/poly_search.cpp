#include "cspbd/poly_search.hpp"

#include <algorithm>
#include <stdexcept>

namespace cspbd {

IdentityFamily IdentityFamily::near_unanimity(int arity) {
    if (arity < 3)
        throw std::invalid_argument("near-unanimity arity must be at least 3");
    return {Kind::NearUnanimity, arity};
}

int IdentityFamily::operation_arity() const {
    switch (kind) {
    case Kind::Semilattice:
        return 2;
    case Kind::Majority:
        return 3;
    case Kind::NearUnanimity:
        return nu_arity;
    case Kind::Maltsev:
        return 3;
    case Kind::TsiAllArities:
        return 0;
    }
    return 0;
}

std::string IdentityFamily::name() const {
    switch (kind) {
    case Kind::Semilattice:
        return "semilattice";
    case Kind::Majority:
        return "majority";
    case Kind::NearUnanimity:
        return "near_unanimity(" + std::to_string(nu_arity) + ")";
    case Kind::Maltsev:
        return "maltsev";
    case Kind::TsiAllArities:
        return "tsi_all_arities";
    }
    return "?";
}

namespace {

bool next_selection(std::vector<int>& idx, int base) {
    for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
        if (++idx[i] < base)
            return true;
        idx[i] = 0;
    }
    return false;
}

bool check_semilattice(const OperationTable& op) {
    const int d = op.domain_size();
    for (Value x = 0; x < d; ++x) {
        if (op.apply(std::vector<Value>{x, x}) != x)
            return false;
        for (Value y = 0; y < d; ++y) {
            if (op.apply(std::vector<Value>{x, y}) != op.apply(std::vector<Value>{y, x}))
                return false;
            for (Value z = 0; z < d; ++z) {
                Value xy = op.apply(std::vector<Value>{x, y});
                Value yz = op.apply(std::vector<Value>{y, z});
                if (op.apply(std::vector<Value>{xy, z}) != op.apply(std::vector<Value>{x, yz}))
                    return false;
            }
        }
    }
    return true;
}

bool check_near_unanimity(const OperationTable& op) {
    const int d = op.domain_size();
    const int a = op.arity();
    std::vector<Value> args(a);
    for (Value x = 0; x < d; ++x)
        for (Value y = 0; y < d; ++y)
            for (int pos = 0; pos < a; ++pos) {
                std::fill(args.begin(), args.end(), x);
                args[pos] = y;
                if (op.apply(args) != x)
                    return false;
            }
    return true;
}

bool check_maltsev(const OperationTable& op) {
    const int d = op.domain_size();
    for (Value x = 0; x < d; ++x)
        for (Value y = 0; y < d; ++y) {
            if (op.apply(std::vector<Value>{x, x, y}) != y)
                return false;
            if (op.apply(std::vector<Value>{y, x, x}) != y)
                return false;
        }
    return true;
}

// Backtracking state for the dense table over the active domain.
struct TableSearch {
    IdentityFamily::Kind kind;
    int arity;
    int k; // active domain size
    std::vector<Value> table; // -1 = undecided, over dense indices
    std::vector<std::vector<std::vector<int>>> relation_rows; // per relation, rows as dense indices
    std::vector<const Relation*> relations;
    std::vector<Value> dense_to_value;
    std::int64_t steps = 0;
    std::int64_t step_budget = 0;

    std::size_t encode(std::span<const int> args) const {
        std::size_t idx = 0;
        for (int a : args)
            idx = idx * static_cast<std::size_t>(k) + static_cast<std::size_t>(a);
        return idx;
    }

    void charge(std::int64_t amount) {
        steps += amount;
        if (steps > step_budget)
            throw ResourceLimitError("polymorphism search exceeded its step budget");
    }

    // Checks every row selection whose image is fully decided.
    bool preservation_consistent() {
        std::vector<int> pick(arity, 0);
        std::vector<int> args(arity);
        Tuple image;
        for (std::size_t ri = 0; ri < relations.size(); ++ri) {
            const auto& rows = relation_rows[ri];
            const Relation& rel = *relations[ri];
            const int t = static_cast<int>(rows.size());
            if (t == 0 || rel.arity() == 0)
                continue;
            std::fill(pick.begin(), pick.end(), 0);
            image.assign(rel.arity(), 0);
            do {
                charge(1);
                bool decided = true;
                for (int j = 0; j < rel.arity() && decided; ++j) {
                    for (int i = 0; i < arity; ++i)
                        args[i] = rows[pick[i]][j];
                    Value out = table[encode(args)];
                    if (out < 0)
                        decided = false;
                    else
                        image[j] = dense_to_value[out];
                }
                if (decided && !rel.contains(image))
                    return false;
            } while (next_selection(pick, t));
        }
        return true;
    }

    // Associativity and commutativity on decided cells (semilattice only;
    // commutativity also holds by construction through mirroring).
    bool semilattice_consistent() {
        for (int x = 0; x < k; ++x)
            for (int y = 0; y < k; ++y) {
                Value xy = table[encode(std::vector<int>{x, y})];
                if (xy < 0)
                    continue;
                for (int z = 0; z < k; ++z) {
                    charge(1);
                    Value yz = table[encode(std::vector<int>{y, z})];
                    if (yz < 0)
                        continue;
                    Value left = table[encode(std::vector<int>{xy, z})];
                    Value right = table[encode(std::vector<int>{x, yz})];
                    if (left >= 0 && right >= 0 && left != right)
                        return false;
                }
            }
        return true;
    }

    bool consistent() {
        if (kind == IdentityFamily::Kind::Semilattice && !semilattice_consistent())
            return false;
        return preservation_consistent();
    }

    bool dfs(const std::vector<std::size_t>& free_cells, std::size_t at) {
        if (at == free_cells.size())
            return true;
        const std::size_t cell = free_cells[at];
        // A free cell can have been filled through mirroring.
        if (table[cell] >= 0)
            return consistent() && dfs(free_cells, at + 1);
        std::size_t mirror = cell;
        if (kind == IdentityFamily::Kind::Semilattice) {
            int x = static_cast<int>(cell) / k;
            int y = static_cast<int>(cell) % k;
            mirror = encode(std::vector<int>{y, x});
        }
        for (Value v = 0; v < k; ++v) {
            charge(1);
            table[cell] = v;
            if (mirror != cell)
                table[mirror] = v;
            if (consistent() && dfs(free_cells, at + 1))
                return true;
            table[cell] = -1;
            if (mirror != cell)
                table[mirror] = -1;
        }
        return false;
    }
};

// Total fill for argument tuples that touch values outside the active
// domain. Keeps the family identities valid over the whole table.
Value expansion_fill(IdentityFamily::Kind kind, std::span<const Value> args, std::span<const Value> active) {
    auto is_active = [&](Value v) { return std::binary_search(active.begin(), active.end(), v); };
    switch (kind) {
    case IdentityFamily::Kind::Semilattice: {
        // Inactive values act as a chain stacked above the active semilattice:
        // meets with an active value collapse to the active one, meets of two
        // inactive values pick the smaller.
        Value x = args[0], y = args[1];
        bool ax = is_active(x), ay = is_active(y);
        if (ax && !ay)
            return x;
        if (!ax && ay)
            return y;
        return std::min(x, y); // both inactive (both active is handled by the search)
    }
    case IdentityFamily::Kind::Majority:
    case IdentityFamily::Kind::NearUnanimity: {
        // All-but-one-equal tuples must return the repeated value.
        for (std::size_t skip = 0; skip < args.size(); ++skip) {
            Value candidate = args[skip == 0 ? 1 : 0];
            bool uniform = true;
            for (std::size_t i = 0; i < args.size(); ++i)
                if (i != skip && args[i] != candidate) {
                    uniform = false;
                    break;
                }
            if (uniform)
                return candidate;
        }
        return args[0];
    }
    case IdentityFamily::Kind::Maltsev: {
        if (args[0] == args[1])
            return args[2];
        if (args[1] == args[2])
            return args[0];
        return args[0];
    }
    default:
        return args[0];
    }
}

} // namespace

bool satisfies_family_identities(const OperationTable& op, const IdentityFamily& family) {
    if (op.arity() != family.operation_arity())
        return false;
    switch (family.kind) {
    case IdentityFamily::Kind::Semilattice:
        return check_semilattice(op);
    case IdentityFamily::Kind::Majority:
    case IdentityFamily::Kind::NearUnanimity:
        return check_near_unanimity(op);
    case IdentityFamily::Kind::Maltsev:
        return check_maltsev(op);
    case IdentityFamily::Kind::TsiAllArities:
        break;
    }
    throw std::invalid_argument("family has no finitary identity check");
}

std::optional<OperationTable> search_polymorphism(const Language& language, const IdentityFamily& family,
                                                  const Limits& limits) {
    if (family.kind == IdentityFamily::Kind::TsiAllArities)
        throw std::invalid_argument("tsi_all_arities is decided by the set-function membership test");

    const int arity = family.operation_arity();
    if (arity > limits.table_arity_cap)
        throw ResourceLimitError("family arity exceeds the operation table cap");

    std::vector<Value> active = active_domain(language);
    const int k = static_cast<int>(active.size());
    if (k == 0)
        return OperationTable(arity, 0, {}); // trivial witness over the empty domain

    std::size_t cells = 1;
    for (int i = 0; i < arity; ++i) {
        cells *= static_cast<std::size_t>(k);
        if (cells > (std::size_t{1} << 24))
            throw ResourceLimitError("operation table over the active domain is too large");
    }

    std::vector<int> value_to_dense(active.back() + 1, -1);
    for (int i = 0; i < k; ++i)
        value_to_dense[active[i]] = i;

    TableSearch search;
    search.kind = family.kind;
    search.arity = arity;
    search.k = k;
    search.table.assign(cells, -1);
    search.dense_to_value = active;
    search.step_budget = limits.search_step_budget;
    for (const Relation& r : language.relations()) {
        search.relations.push_back(&r);
        std::vector<std::vector<int>> rows;
        rows.reserve(r.tuple_count());
        for (int i = 0; i < r.tuple_count(); ++i) {
            auto row = r.row(i);
            std::vector<int> dense(row.size());
            for (std::size_t j = 0; j < row.size(); ++j)
                dense[j] = value_to_dense[row[j]];
            rows.push_back(std::move(dense));
        }
        search.relation_rows.push_back(std::move(rows));
    }

    // Identity-forced cells.
    std::vector<int> args(arity, 0);
    do {
        std::size_t cell = search.encode(args);
        switch (family.kind) {
        case IdentityFamily::Kind::Semilattice:
            if (args[0] == args[1])
                search.table[cell] = args[0];
            break;
        case IdentityFamily::Kind::Majority:
        case IdentityFamily::Kind::NearUnanimity: {
            for (int skip = 0; skip < arity; ++skip) {
                Value candidate = args[skip == 0 ? 1 : 0];
                bool uniform = true;
                for (int i = 0; i < arity; ++i)
                    if (i != skip && args[i] != candidate) {
                        uniform = false;
                        break;
                    }
                if (uniform) {
                    search.table[cell] = candidate;
                    break;
                }
            }
            break;
        }
        case IdentityFamily::Kind::Maltsev:
            if (args[0] == args[1])
                search.table[cell] = args[2];
            else if (args[1] == args[2])
                search.table[cell] = args[0];
            break;
        case IdentityFamily::Kind::TsiAllArities:
            break;
        }
    } while (next_selection(args, k));

    std::vector<std::size_t> free_cells;
    for (std::size_t c = 0; c < cells; ++c)
        if (search.table[c] < 0)
            free_cells.push_back(c);

    if (!search.consistent())
        return std::nullopt;
    if (!search.dfs(free_cells, 0))
        return std::nullopt;

    // Expand the dense witness to a total table over {0, ..., max(active)}.
    const int full_domain = active.back() + 1;
    std::size_t full_cells = 1;
    for (int i = 0; i < arity; ++i)
        full_cells *= static_cast<std::size_t>(full_domain);
    std::vector<Value> expanded(full_cells);
    std::vector<Value> full_args(arity, 0);
    std::size_t idx = 0;
    do {
        bool all_active = true;
        for (Value v : full_args)
            if (value_to_dense[v] < 0) {
                all_active = false;
                break;
            }
        if (all_active) {
            std::vector<int> dense(arity);
            for (int i = 0; i < arity; ++i)
                dense[i] = value_to_dense[full_args[i]];
            expanded[idx] = active[search.table[search.encode(dense)]];
        } else {
            expanded[idx] = expansion_fill(family.kind, full_args, active);
        }
        ++idx;
    } while (next_selection(full_args, full_domain));

    return OperationTable(arity, full_domain, std::move(expanded));
}

} // namespace cspbd
