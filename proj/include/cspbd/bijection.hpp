#pragma once

#include "cspbd/relation.hpp"

#include <map>

namespace cspbd {

class Relation;

// An injective value map, used for value renamings and the chain gadgets.
class BijectionMap {
public:
    BijectionMap() = default;
    explicit BijectionMap(const std::map<Value, Value>& forward);

    bool defined_on(Value v) const { return forward_.count(v) > 0; }
    Value at(Value v) const;
    int size() const { return static_cast<int>(forward_.size()); }
    bool empty() const { return forward_.empty(); }

    const std::map<Value, Value>& entries() const { return forward_; }
    std::vector<Value> source_values() const;
    std::vector<Value> image_values() const;

    BijectionMap inverse() const;
    // Composition (outer after inner): x -> outer(inner(x)).
    static BijectionMap compose(const BijectionMap& outer, const BijectionMap& inner);

private:
    std::map<Value, Value> forward_;
};

// The binary relation {(v, phi(v))} encoding a nonempty bijection phi.
Relation bijection_relation(const BijectionMap& bijection);

} // namespace cspbd
