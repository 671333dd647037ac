#include "cspbd/language.hpp"

#include <algorithm>
#include <stdexcept>

namespace cspbd {

Language::Language(int domain_size, std::vector<Relation> relations)
    : domain_size_(domain_size), relations_(std::move(relations)) {
    if (domain_size_ < 1)
        throw std::invalid_argument("language domain size must be positive");
    // Normalize every relation to the shared domain so that set semantics
    // compare tuple content only.
    for (Relation& r : relations_) {
        if (r.domain_size() > domain_size_)
            throw std::invalid_argument("relation domain exceeds language domain");
        if (r.domain_size() != domain_size_)
            r = Relation(r.arity(), domain_size_, r.tuples());
    }
    std::sort(relations_.begin(), relations_.end());
    relations_.erase(std::unique(relations_.begin(), relations_.end()), relations_.end());
}

std::vector<Value> active_domain(const Language& language) {
    std::vector<Value> values;
    for (const Relation& r : language.relations()) {
        auto vals = r.occurring_values();
        values.insert(values.end(), vals.begin(), vals.end());
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

Language rename_language(const Language& language, const BijectionMap& bijection) {
    Value max_image = 0;
    for (Value v : active_domain(language)) {
        if (!bijection.defined_on(v))
            throw std::invalid_argument("bijection undefined on active value " + std::to_string(v));
        max_image = std::max(max_image, bijection.at(v));
    }
    int new_domain = std::max(language.domain_size(), max_image + 1);

    std::vector<Relation> renamed;
    renamed.reserve(language.relations().size());
    for (const Relation& r : language.relations()) {
        std::vector<Tuple> rows = r.tuples();
        for (Tuple& t : rows)
            for (Value& v : t)
                v = bijection.at(v);
        renamed.emplace_back(r.arity(), new_domain, rows);
    }
    return Language(new_domain, std::move(renamed));
}

} // namespace cspbd
