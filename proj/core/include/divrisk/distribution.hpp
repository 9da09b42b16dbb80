#pragma once

#include "divrisk/value.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace divrisk {

/// Finite-support probability distribution: strictly increasing atom values with
/// positive probabilities summing to one. Immutable after construction; all
/// operations are pure.
///
/// S = Rat gives the exact mode (the default throughout); S = double gives the
/// tolerance mode, where values within eps are merged by probability-weighted mean.
template <class S>
class Distribution {
public:
    using Scalar = S;
    using Traits = scalar_traits<S>;

    struct Atom {
        S value;
        S prob;
    };

    /// Canonicalizing constructor: sorts, merges, validates, normalizes total mass.
    static Distribution from_atoms(std::vector<Atom> atoms, double eps = 1e-9) {
        if (atoms.empty()) throw std::domain_error("distribution needs at least one atom");
        for (const auto& a : atoms) {
            if constexpr (!Traits::exact) {
                if (!std::isfinite(a.value) || !std::isfinite(a.prob))
                    throw std::domain_error("non-finite atom");
            }
            if (a.prob < Traits::zero()) throw std::domain_error("negative probability");
        }
        std::stable_sort(atoms.begin(), atoms.end(),
                         [](const Atom& a, const Atom& b) { return a.value < b.value; });
        std::vector<S> vals, probs;
        for (const auto& a : atoms) {
            if (a.prob == Traits::zero()) continue;
            if (!vals.empty() && mergeable(vals.back(), a.value, eps)) {
                S w = probs.back() + a.prob;
                vals.back() = (vals.back() * probs.back() + a.value * a.prob) / w;
                probs.back() = w;
                // weighted mean can drift into the previous cluster in float mode
                while (vals.size() >= 2 && mergeable(vals[vals.size() - 2], vals.back(), eps)) {
                    S w2 = probs[vals.size() - 2] + probs.back();
                    vals[vals.size() - 2] =
                        (vals[vals.size() - 2] * probs[vals.size() - 2] + vals.back() * probs.back()) / w2;
                    probs[vals.size() - 2] = w2;
                    vals.pop_back();
                    probs.pop_back();
                }
            } else {
                vals.push_back(a.value);
                probs.push_back(a.prob);
            }
        }
        if (vals.empty()) throw std::domain_error("all atoms have zero probability");
        S total = std::accumulate(probs.begin(), probs.end(), Traits::zero());
        if (total <= Traits::zero()) throw std::domain_error("total probability not positive");
        if constexpr (!Traits::exact) {
            if (std::fabs(total - 1.0) > 1e-12) {
                // normalize; inputs more than coarse-off are rejected
                if (std::fabs(total - 1.0) > 1e-6)
                    throw std::domain_error("probabilities sum to " + Traits::str(total) + ", not 1");
            }
        }
        for (auto& p : probs) p = p / total;
        return Distribution(std::move(vals), std::move(probs));
    }

    static Distribution point_mass(const S& v) {
        return Distribution({v}, {Traits::one()});
    }

    size_t size() const { return values_.size(); }
    const std::vector<S>& values() const { return values_; }
    const std::vector<S>& probs() const { return probs_; }
    const S& value(size_t i) const { return values_[i]; }
    const S& prob(size_t i) const { return probs_[i]; }

    bool operator==(const Distribution& o) const {
        return values_ == o.values_ && probs_ == o.probs_;
    }

    /// Left quantile: smallest atom whose cumulative probability reaches t.
    S quantile(const S& t) const {
        if (!(t > Traits::zero() && t < Traits::one()))
            throw std::domain_error("quantile level must lie in (0,1)");
        S cum = Traits::zero();
        for (size_t i = 0; i < values_.size(); ++i) {
            cum = cum + probs_[i];
            if (cum >= t) return values_[i];
        }
        return values_.back();  // guards float rounding at t near 1
    }

    /// Cumulative distribution function P(X <= v).
    S cdf(const S& v) const {
        S cum = Traits::zero();
        for (size_t i = 0; i < values_.size() && values_[i] <= v; ++i) cum = cum + probs_[i];
        return cum;
    }

    S mean() const {
        S m = Traits::zero();
        for (size_t i = 0; i < values_.size(); ++i) m = m + values_[i] * probs_[i];
        return m;
    }

    S variance() const {
        S m = mean(), s = Traits::zero();
        for (size_t i = 0; i < values_.size(); ++i) s = s + values_[i] * values_[i] * probs_[i];
        return s - m * m;
    }

    S min_value() const { return values_.front(); }
    S max_value() const { return values_.back(); }
    std::pair<S, S> support_bounds() const { return {values_.front(), values_.back()}; }
    S range_width() const { return values_.back() - values_.front(); }

    /// E[(X - k)+], the stop-loss transform.
    S stop_loss(const S& k) const {
        S s = Traits::zero();
        for (size_t i = 0; i < values_.size(); ++i)
            if (values_[i] > k) s = s + (values_[i] - k) * probs_[i];
        return s;
    }

    /// E[e^(a X)]; irrational, so always a double-backed Value.
    Value exp_moment(const Rat& a) const {
        double s = 0;
        for (size_t i = 0; i < values_.size(); ++i) {
            double term = std::exp(to_double(a) * Traits::to_dbl(values_[i])) * Traits::to_dbl(probs_[i]);
            if (!std::isfinite(term))
                throw std::domain_error("exp moment overflow at atom " + Traits::str(values_[i]));
            s += term;
        }
        if (!std::isfinite(s)) throw std::domain_error("exp moment overflow");
        return Value::from_double(s);
    }

    /// Law of a*X + b.
    Distribution affine(const S& a, const S& b) const {
        std::vector<Atom> atoms;
        atoms.reserve(values_.size());
        for (size_t i = 0; i < values_.size(); ++i)
            atoms.push_back({a * values_[i] + b, probs_[i]});
        return from_atoms(std::move(atoms));
    }

    /// Cumulative probability breakpoints c_1 < ... < c_n = 1.
    std::vector<S> cumulative() const {
        std::vector<S> cum(values_.size());
        S c = Traits::zero();
        for (size_t i = 0; i < values_.size(); ++i) {
            c = c + probs_[i];
            cum[i] = c;
        }
        cum.back() = Traits::one();
        return cum;
    }

private:
    Distribution(std::vector<S> v, std::vector<S> p)
        : values_(std::move(v)), probs_(std::move(p)) {}
    Distribution(std::initializer_list<S> v, std::initializer_list<S> p)
        : values_(v), probs_(p) {}

    static bool mergeable(const S& a, const S& b, double eps) {
        if constexpr (Traits::exact)
            return a == b;
        else
            return std::fabs(a - b) <= eps;
    }

    std::vector<S> values_;
    std::vector<S> probs_;
};

using ExactDist = Distribution<Rat>;
using FloatDist = Distribution<double>;

/// Convenience builder from (value, prob) pairs.
template <class S>
Distribution<S> make_dist(std::vector<std::pair<S, S>> pairs, double eps = 1e-9) {
    std::vector<typename Distribution<S>::Atom> atoms;
    atoms.reserve(pairs.size());
    for (auto& [v, p] : pairs) atoms.push_back({v, p});
    return Distribution<S>::from_atoms(std::move(atoms), eps);
}

}  // namespace divrisk
