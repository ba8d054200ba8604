#pragma once

#include <compare>

#include "core/expr.hpp"
#include "core/state.hpp"

namespace aoi {

// Deficiency counts of one assertion against a repository, weighted by state
// multiplicity, plus the assertion size.
struct FitnessVector {
    long long fp = 0;
    long long fn = 0;
    int size = 0;
    bool operator==(const FitnessVector&) const = default;
};

// Objective of a population: which deficiency count is compared first.
enum class PopKind { FpFirst, FnFirst };

// fp: weight of correct states where e fails or errors. fn: weight of
// incorrect states where e passes. Evaluation errors count as failing.
FitnessVector count_deficiencies(const Expr& e, const StateRepo& repo);

// Lexicographic order for the population's objective; `less` means better.
// FpFirst compares (fp, fn, size), FnFirst compares (fn, fp, size).
std::strong_ordering compare_for(PopKind pop, const FitnessVector& a, const FitnessVector& b);

inline bool better_for(PopKind pop, const FitnessVector& a, const FitnessVector& b) {
    return compare_for(pop, a, b) == std::strong_ordering::less;
}

} // namespace aoi
