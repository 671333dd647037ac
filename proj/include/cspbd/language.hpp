#pragma once

#include "cspbd/bijection.hpp"
#include "cspbd/relation.hpp"

#include <vector>

namespace cspbd {

// A constraint language: a set of relations over a common domain, kept
// sorted and deduplicated so that structurally equal languages compare equal.
// The empty language is valid.
class Language {
public:
    explicit Language(int domain_size = 1) : domain_size_(domain_size) {}
    Language(int domain_size, std::vector<Relation> relations);

    int domain_size() const { return domain_size_; }
    const std::vector<Relation>& relations() const { return relations_; }
    bool empty() const { return relations_.empty(); }
    int size() const { return static_cast<int>(relations_.size()); }

    bool operator==(const Language& other) const {
        return domain_size_ == other.domain_size_ && relations_ == other.relations_;
    }

private:
    int domain_size_;
    std::vector<Relation> relations_;
};

// Exactly the values occurring in some tuple of some relation, sorted.
std::vector<Value> active_domain(const Language& language);

// Pointwise value substitution. The bijection must cover the whole active
// domain; the resulting domain is grown to fit the image values.
Language rename_language(const Language& language, const BijectionMap& bijection);

} // namespace cspbd
