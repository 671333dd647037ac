#include "cspbd/relation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace cspbd {

namespace {

bool lex_less(std::span<const Value> a, std::span<const Value> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

Relation::Relation(int arity, int domain_size, const std::vector<Tuple>& tuples) {
    if (arity < 0)
        throw std::invalid_argument("relation arity must be nonnegative");
    if (domain_size < 1)
        throw std::invalid_argument("relation domain size must be positive");
    arity_ = arity;
    domain_size_ = domain_size;

    std::vector<Tuple> rows = tuples;
    for (const Tuple& t : rows) {
        if (static_cast<int>(t.size()) != arity)
            throw std::invalid_argument("tuple arity mismatch: expected " + std::to_string(arity));
        for (Value v : t)
            if (v < 0 || v >= domain_size)
                throw std::invalid_argument("tuple value " + std::to_string(v) + " outside domain of size " +
                                            std::to_string(domain_size));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    tuple_count_ = static_cast<int>(rows.size());
    cells_.reserve(static_cast<size_t>(tuple_count_) * arity_);
    for (const Tuple& t : rows)
        cells_.insert(cells_.end(), t.begin(), t.end());
}

Relation Relation::empty(int arity, int domain_size) {
    return Relation(arity, domain_size, {});
}

Relation Relation::nullary_unit(int domain_size) {
    return Relation(0, domain_size, {Tuple{}});
}

std::span<const Value> Relation::row(int i) const {
    return std::span<const Value>(cells_.data() + static_cast<size_t>(i) * arity_, static_cast<size_t>(arity_));
}

std::vector<Tuple> Relation::tuples() const {
    std::vector<Tuple> out;
    out.reserve(tuple_count_);
    for (int i = 0; i < tuple_count_; ++i) {
        auto r = row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

Tuple Relation::column(int j) const {
    Tuple out;
    out.reserve(tuple_count_);
    for (int i = 0; i < tuple_count_; ++i)
        out.push_back(row(i)[j]);
    return out;
}

std::vector<Value> Relation::occurring_values() const {
    std::vector<Value> vals(cells_.begin(), cells_.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

bool Relation::contains(std::span<const Value> tuple) const {
    if (static_cast<int>(tuple.size()) != arity_)
        return false;
    if (arity_ == 0)
        return tuple_count_ > 0;
    int lo = 0, hi = tuple_count_;
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        auto r = row(mid);
        if (lex_less(r, tuple))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < tuple_count_ && std::equal(tuple.begin(), tuple.end(), row(lo).begin());
}

bool Relation::operator==(const Relation& other) const {
    return arity_ == other.arity_ && domain_size_ == other.domain_size_ && tuple_count_ == other.tuple_count_ &&
           cells_ == other.cells_;
}

bool Relation::operator<(const Relation& other) const {
    if (arity_ != other.arity_)
        return arity_ < other.arity_;
    if (cells_ != other.cells_)
        return cells_ < other.cells_;
    return domain_size_ < other.domain_size_;
}

Relation extend_relation(const Relation& base, const std::vector<ColumnSpec>& extra) {
    int new_arity = base.arity() + static_cast<int>(extra.size());
    int new_domain = base.domain_size();
    for (const ColumnSpec& spec : extra) {
        if (spec.kind == ColumnSpec::Kind::Constant) {
            if (spec.value < 0)
                throw std::invalid_argument("constant column value must be nonnegative");
            new_domain = std::max(new_domain, spec.value + 1);
        } else if (spec.value < 0 || spec.value >= base.arity()) {
            throw std::invalid_argument("copied column index out of range");
        }
    }

    std::vector<Tuple> rows;
    rows.reserve(base.tuple_count());
    for (int i = 0; i < base.tuple_count(); ++i) {
        auto r = base.row(i);
        Tuple t(r.begin(), r.end());
        for (const ColumnSpec& spec : extra)
            t.push_back(spec.kind == ColumnSpec::Kind::Constant ? spec.value : r[spec.value]);
        rows.push_back(std::move(t));
    }
    return Relation(new_arity, new_domain, rows);
}

bool is_extension(const Relation& extended, const Relation& base) {
    if (extended.tuple_count() != base.tuple_count())
        return false;
    if (extended.arity() < base.arity())
        return false;

    std::map<Tuple, int> needed; // column vector -> multiplicity in the base matrix
    for (int j = 0; j < base.arity(); ++j)
        ++needed[base.column(j)];
    std::map<Tuple, int> present;
    for (int j = 0; j < extended.arity(); ++j)
        ++present[extended.column(j)];

    for (const auto& [col, count] : needed) {
        auto it = present.find(col);
        if (it == present.end() || it->second < count)
            return false;
    }
    for (const auto& [col, count] : present) {
        if (needed.count(col))
            continue; // matched columns plus possible copies of a base column
        bool constant = true;
        for (size_t i = 1; i < col.size(); ++i)
            if (col[i] != col[0]) {
                constant = false;
                break;
            }
        if (!constant)
            return false;
    }
    return true;
}

Relation gadget_relation(GadgetKind kind, int arity, int base_value) {
    if (base_value < 0)
        throw std::invalid_argument("gadget base value must be nonnegative");
    const Value e = base_value;
    if (kind == GadgetKind::TwoRow) {
        if (arity < 2)
            throw std::invalid_argument("two-row gadget needs arity >= 2");
        Tuple t1(arity, e), t2(arity, e + 1);
        t1[0] = e + 1;
        t2[0] = e;
        return Relation(arity, e + 2, {t1, t2});
    }
    if (arity < 3)
        throw std::invalid_argument("three-row gadget needs arity >= 3");
    Tuple t1(arity, e), t2(arity, e), t3(arity, e + 1);
    t1[0] = e + 1;
    t2[1] = e + 1;
    t3[0] = e;
    t3[1] = e;
    return Relation(arity, e + 2, {t1, t2, t3});
}

} // namespace cspbd
