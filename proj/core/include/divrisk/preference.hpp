#pragma once

#include "divrisk/functional.hpp"

#include <string>
#include <vector>

namespace divrisk {

enum class Direction { HigherBetter, LowerBetter };

inline const char* direction_name(Direction d) {
    return d == Direction::HigherBetter ? "higher" : "lower";
}

enum class ComparisonResult { StrictlyBetter, StrictlyWorse, Equivalent, Incomparable };

inline const char* comparison_name(ComparisonResult r) {
    switch (r) {
        case ComparisonResult::StrictlyBetter: return "strictly_better";
        case ComparisonResult::StrictlyWorse: return "strictly_worse";
        case ComparisonResult::Equivalent: return "equivalent";
        case ComparisonResult::Incomparable: return "incomparable";
    }
    return "?";
}

/// A transitive comparison rule: one functional with a direction (total), or
/// several (Pareto, possibly incomplete). Total preferences never return
/// Incomparable.
class Preference {
public:
    struct Criterion {
        FunctionalPtr spec;
        Direction direction;
    };

    static Preference total(FunctionalPtr spec, Direction dir) {
        Preference p;
        p.criteria_.push_back({std::move(spec), dir});
        return p;
    }
    static Preference pareto(std::vector<Criterion> criteria) {
        if (criteria.empty()) throw std::domain_error("pareto preference needs criteria");
        Preference p;
        p.criteria_ = std::move(criteria);
        p.pareto_ = true;
        return p;
    }

    bool is_total() const { return !pareto_; }
    const std::vector<Criterion>& criteria() const { return criteria_; }

private:
    std::vector<Criterion> criteria_;
    bool pareto_ = false;
};

/// Compares a against b. Equal distribution values short-circuit to Equivalent
/// (law invariance). In float mode, per-criterion equality is |va-vb| <= eps.
template <class S>
ComparisonResult compare(const Preference& pref, const Distribution<S>& a,
                         const Distribution<S>& b, const NumericMode& mode = NumericMode::exact()) {
    if (a == b) return ComparisonResult::Equivalent;
    bool some_better = false, some_worse = false;
    for (const auto& c : pref.criteria()) {
        Value va = evaluate(c.spec, a);
        Value vb = evaluate(c.spec, b);
        int cmp = mode.is_exact() ? compare(va, vb) : compare_eps(va, vb, mode.epsilon);
        if (c.direction == Direction::LowerBetter) cmp = -cmp;
        if (cmp > 0) some_better = true;
        if (cmp < 0) some_worse = true;
    }
    if (some_better && some_worse) return ComparisonResult::Incomparable;
    if (some_better) return ComparisonResult::StrictlyBetter;
    if (some_worse) return ComparisonResult::StrictlyWorse;
    return ComparisonResult::Equivalent;
}

}  // namespace divrisk
