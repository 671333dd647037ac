#include "cspbd/bijection.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cspbd {

BijectionMap::BijectionMap(const std::map<Value, Value>& forward) : forward_(forward) {
    std::set<Value> images;
    for (const auto& [src, img] : forward_) {
        if (src < 0 || img < 0)
            throw std::invalid_argument("bijection values must be nonnegative");
        if (!images.insert(img).second)
            throw std::invalid_argument("bijection map is not injective");
    }
}

Value BijectionMap::at(Value v) const {
    auto it = forward_.find(v);
    if (it == forward_.end())
        throw std::invalid_argument("value has no image under the bijection");
    return it->second;
}

std::vector<Value> BijectionMap::source_values() const {
    std::vector<Value> out;
    out.reserve(forward_.size());
    for (const auto& [src, img] : forward_)
        out.push_back(src);
    return out;
}

std::vector<Value> BijectionMap::image_values() const {
    std::vector<Value> out;
    out.reserve(forward_.size());
    for (const auto& [src, img] : forward_)
        out.push_back(img);
    std::sort(out.begin(), out.end());
    return out;
}

BijectionMap BijectionMap::inverse() const {
    std::map<Value, Value> back;
    for (const auto& [src, img] : forward_)
        back[img] = src;
    return BijectionMap(back);
}

BijectionMap BijectionMap::compose(const BijectionMap& outer, const BijectionMap& inner) {
    std::map<Value, Value> combined;
    for (const auto& [src, mid] : inner.entries())
        combined[src] = outer.at(mid);
    return BijectionMap(combined);
}

Relation bijection_relation(const BijectionMap& bijection) {
    if (bijection.empty())
        throw std::invalid_argument("bijection relation needs a nonempty map");
    Value max_value = 0;
    std::vector<Tuple> rows;
    rows.reserve(bijection.size());
    for (const auto& [src, img] : bijection.entries()) {
        rows.push_back({src, img});
        max_value = std::max({max_value, src, img});
    }
    return Relation(2, max_value + 1, rows);
}

} // namespace cspbd
