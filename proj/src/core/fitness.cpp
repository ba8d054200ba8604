#include "core/fitness.hpp"

namespace aoi {

FitnessVector count_deficiencies(const Expr& e, const StateRepo& repo) {
    FitnessVector f;
    f.size = e.size();
    const int precision = repo.precision();
    for (const auto& s : repo.positives()) {
        auto r = evaluate(e, s.values, precision);
        if (!r || !*r) f.fp += s.multiplicity; // error folds into failing
    }
    for (const auto& s : repo.negatives()) {
        auto r = evaluate(e, s.values, precision);
        if (r && *r) f.fn += s.multiplicity;
    }
    return f;
}

std::strong_ordering compare_for(PopKind pop, const FitnessVector& a, const FitnessVector& b) {
    if (pop == PopKind::FpFirst) {
        if (auto c = a.fp <=> b.fp; c != 0) return c;
        if (auto c = a.fn <=> b.fn; c != 0) return c;
    } else {
        if (auto c = a.fn <=> b.fn; c != 0) return c;
        if (auto c = a.fp <=> b.fp; c != 0) return c;
    }
    return a.size <=> b.size;
}

} // namespace aoi
