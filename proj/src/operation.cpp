#include "cspbd/operation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cspbd {

namespace {

std::size_t table_size(int arity, int domain_size) {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) {
        n *= static_cast<std::size_t>(domain_size);
        if (domain_size > 0 && n > (std::size_t{1} << 40))
            throw std::invalid_argument("operation table too large");
    }
    return domain_size == 0 ? 0 : n;
}

// Advances a mixed-radix counter over `size`-long tuples of the given values.
bool next_selection(std::vector<int>& idx, int base) {
    for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
        if (++idx[i] < base)
            return true;
        idx[i] = 0;
    }
    return false;
}

} // namespace

OperationTable::OperationTable(int arity, int domain_size, std::vector<Value> cells)
    : arity_(arity), domain_size_(domain_size), cells_(std::move(cells)) {
    if (arity_ < 1)
        throw std::invalid_argument("operation arity must be at least 1");
    if (domain_size_ < 0)
        throw std::invalid_argument("operation domain size must be nonnegative");
    if (cells_.size() != table_size(arity_, domain_size_))
        throw std::invalid_argument("operation table has wrong cell count");
    for (Value v : cells_)
        if (v < 0 || v >= domain_size_)
            throw std::invalid_argument("operation table output out of range");
}

std::size_t OperationTable::encode(std::span<const Value> args) const {
    std::size_t index = 0;
    for (Value a : args)
        index = index * static_cast<std::size_t>(domain_size_) + static_cast<std::size_t>(a);
    return index;
}

Value OperationTable::apply(std::span<const Value> args) const {
    if (static_cast<int>(args.size()) != arity_)
        throw std::invalid_argument("operation applied with wrong argument count");
    for (Value a : args)
        if (a < 0 || a >= domain_size_)
            throw std::invalid_argument("operation argument out of domain");
    return cells_[encode(args)];
}

int builtin_arity(BuiltinOp op) {
    return op == BuiltinOp::DualDiscriminator ? 3 : 2;
}

std::string builtin_name(BuiltinOp op) {
    switch (op) {
    case BuiltinOp::Max:
        return "max";
    case BuiltinOp::Min:
        return "min";
    case BuiltinOp::DualDiscriminator:
        return "dual_discriminator";
    }
    return "?";
}

Value eval_builtin(BuiltinOp op, std::span<const Value> args) {
    switch (op) {
    case BuiltinOp::Max:
        return std::max(args[0], args[1]);
    case BuiltinOp::Min:
        return std::min(args[0], args[1]);
    case BuiltinOp::DualDiscriminator:
        return args[1] == args[2] ? args[1] : args[0];
    }
    return args[0];
}

OperationTable materialize_builtin(BuiltinOp op, int domain_size) {
    const int arity = builtin_arity(op);
    std::vector<Value> cells;
    cells.reserve(table_size(arity, domain_size));
    if (domain_size > 0) {
        std::vector<Value> args(arity, 0);
        do {
            cells.push_back(eval_builtin(op, args));
        } while (next_selection(args, domain_size));
    }
    return OperationTable(arity, domain_size, std::move(cells));
}

bool is_idempotent(const OperationTable& op) {
    std::vector<Value> args(op.arity());
    for (Value x = 0; x < op.domain_size(); ++x) {
        std::fill(args.begin(), args.end(), x);
        if (op.apply(args) != x)
            return false;
    }
    return true;
}

Tuple apply_rowwise(const OperationTable& op, std::span<const Tuple> rows) {
    if (static_cast<int>(rows.size()) != op.arity())
        throw std::invalid_argument("row count does not match operation arity");
    const std::size_t width = rows.empty() ? 0 : rows[0].size();
    for (const Tuple& r : rows)
        if (r.size() != width)
            throw std::invalid_argument("rows have mismatched arity");
    Tuple image(width);
    std::vector<Value> args(op.arity());
    for (std::size_t j = 0; j < width; ++j) {
        for (int i = 0; i < op.arity(); ++i)
            args[i] = rows[i][j];
        image[j] = op.apply(args);
    }
    return image;
}

bool preserves(const OperationTable& op, const Relation& relation) {
    const int t = relation.tuple_count();
    if (t == 0)
        return true;
    for (Value v : relation.occurring_values())
        if (v >= op.domain_size())
            throw std::invalid_argument("relation value outside operation domain");
    if (relation.arity() == 0)
        return true; // the only image is the empty tuple, already present

    const int a = op.arity();
    std::vector<int> pick(a, 0);
    std::vector<Value> args(a);
    Tuple image(relation.arity());
    do {
        for (int j = 0; j < relation.arity(); ++j) {
            for (int i = 0; i < a; ++i)
                args[i] = relation.row(pick[i])[j];
            image[j] = op.cells()[op.encode(args)];
        }
        if (!relation.contains(image))
            return false;
    } while (next_selection(pick, t));
    return true;
}

bool is_closed_on(const OperationTable& op, std::span<const Value> values) {
    if (values.empty())
        return true;
    for (Value v : values)
        if (v >= op.domain_size())
            throw std::invalid_argument("value outside operation domain");
    const int a = op.arity();
    std::vector<int> pick(a, 0);
    std::vector<Value> args(a);
    do {
        for (int i = 0; i < a; ++i)
            args[i] = values[pick[i]];
        Value out = op.cells()[op.encode(args)];
        if (!std::binary_search(values.begin(), values.end(), out))
            return false;
    } while (next_selection(pick, static_cast<int>(values.size())));
    return true;
}

bool preserves_language(const OperationTable& op, const Language& language) {
    std::vector<Value> active = active_domain(language);
    if (!is_closed_on(op, active))
        return false;
    for (const Relation& r : language.relations())
        if (!preserves(op, r))
            return false;
    return true;
}

} // namespace cspbd
