#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cspbd {

// Work budgets for the exponential procedures. All caps are configuration;
// exceeding one raises ResourceLimitError, which callers must treat as
// "failed to certify", never as a negative answer.
struct Limits {
    std::int64_t naive_assignment_budget = 1'000'000;  // d^|B| in the naive backdoor check
    std::int64_t factored_product_budget = 10'000'000; // local-assignment products over constraint subsets
    std::int64_t bruteforce_budget = 10'000'000;       // C(n,k) * d^k in the brute-force detector
    std::int64_t search_step_budget = 50'000'000;      // probes in the polymorphism table search
    std::int64_t witness_language_budget = 5'000'000;  // candidate languages in the non-Helly witness search
    int table_arity_cap = 4;                           // dense operation tables have d^arity cells
    int tsi_domain_cap = 6;                            // |D(language)| in the tsi membership test
    int tsi_tuple_cap = 32;                            // tuples per relation in the tsi membership test
    std::int64_t tsi_subset_budget = 2'000'000;        // enumerated tuple subsets in the tsi membership test
};

class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cspbd
