#pragma once

#include "divrisk/distribution.hpp"

#include <optional>

namespace divrisk {

/// Outcome of a concave-order test. `witness` is a stop-loss kink where
/// dominance fails when the means matched but dominance did not hold.
template <class S>
struct OrderVerdict {
    bool geq = false;
    std::optional<S> witness;
};

namespace detail {
template <class S>
std::vector<S> union_values(const Distribution<S>& a, const Distribution<S>& b) {
    std::vector<S> ks = a.values();
    ks.insert(ks.end(), b.values().begin(), b.values().end());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

/// Stop-loss evaluated at every point of a sorted grid in one sweep, via
/// suffix mass/moment sums: E[(X-k)+] = M_{>k} - k P_{>k}.
template <class S>
std::vector<S> stop_loss_at(const Distribution<S>& d, const std::vector<S>& ks) {
    using T = scalar_traits<S>;
    const size_t n = d.size();
    std::vector<S> suffix_mass(n + 1, T::zero()), suffix_moment(n + 1, T::zero());
    for (size_t i = n; i-- > 0;) {
        suffix_mass[i] = suffix_mass[i + 1] + d.prob(i);
        suffix_moment[i] = suffix_moment[i + 1] + d.prob(i) * d.value(i);
    }
    std::vector<S> out;
    out.reserve(ks.size());
    size_t j = 0;  // first atom with value > k
    for (const S& k : ks) {
        while (j < n && !(d.value(j) > k)) ++j;
        out.push_back(suffix_moment[j] - k * suffix_mass[j]);
    }
    return out;
}
}  // namespace detail

/// X >=_cv Y: equal means and stop-loss of Y dominates stop-loss of X at every
/// atom of either support. Both stop-loss transforms are piecewise linear with
/// kinks only at atoms, so the finite check is exact.
template <class S>
OrderVerdict<S> concave_order_geq(const Distribution<S>& x, const Distribution<S>& y,
                                  double eps = 1e-9) {
    using T = scalar_traits<S>;
    if (!T::close(x.mean(), y.mean(), eps)) return {false, std::nullopt};
    std::vector<S> ks = detail::union_values(x, y);
    std::vector<S> slx = detail::stop_loss_at(x, ks);
    std::vector<S> sly = detail::stop_loss_at(y, ks);
    for (size_t i = 0; i < ks.size(); ++i)
        if (!T::leq(slx[i], sly[i], eps)) return {false, ks[i]};
    return {true, std::nullopt};
}

/// X <=_icx Y: stop-loss dominance with no mean condition.
template <class S>
bool increasing_convex_order_leq(const Distribution<S>& x, const Distribution<S>& y,
                                 double eps = 1e-9) {
    using T = scalar_traits<S>;
    std::vector<S> ks = detail::union_values(x, y);
    std::vector<S> slx = detail::stop_loss_at(x, ks);
    std::vector<S> sly = detail::stop_loss_at(y, ks);
    for (size_t i = 0; i < ks.size(); ++i)
        if (!T::leq(slx[i], sly[i], eps)) return false;
    return true;
}

/// Split atom `idx` of d into (v + a, split*p) and (v - b, (1-split)*p) with
/// a = 2*delta*(1-split), b = 2*delta*split, which preserves the mean exactly.
/// The result is below d in the concave order.
template <class S>
Distribution<S> mean_preserving_spread(const Distribution<S>& d, size_t idx, const S& delta,
                                       const S& split) {
    using T = scalar_traits<S>;
    if (idx >= d.size()) throw std::domain_error("spread: atom index out of range");
    if (!(delta > T::zero())) throw std::domain_error("spread: delta must be positive");
    if (!(split > T::zero() && split < T::one()))
        throw std::domain_error("spread: split must lie in (0,1)");
    S a = T::from_int(2) * delta * (T::one() - split);
    S b = T::from_int(2) * delta * split;
    std::vector<typename Distribution<S>::Atom> atoms;
    for (size_t i = 0; i < d.size(); ++i) {
        if (i == idx) {
            atoms.push_back({d.value(i) + a, split * d.prob(i)});
            atoms.push_back({d.value(i) - b, (T::one() - split) * d.prob(i)});
        } else {
            atoms.push_back({d.value(i), d.prob(i)});
        }
    }
    return Distribution<S>::from_atoms(std::move(atoms));
}

/// Conditional expectation over bins: each bin's atoms collapse to their
/// probability-weighted mean. Result dominates d in the concave order.
/// `bin_edges` are increasing; bin i is (edges[i-1], edges[i]], the first bin
/// is [edges[0], edges[1]] and edges must cover the support.
template <class S>
Distribution<S> coarsen(const Distribution<S>& d, const std::vector<S>& bin_edges) {
    using T = scalar_traits<S>;
    if (bin_edges.size() < 2) throw std::domain_error("coarsen: need at least two bin edges");
    for (size_t i = 1; i < bin_edges.size(); ++i)
        if (!(bin_edges[i - 1] < bin_edges[i]))
            throw std::domain_error("coarsen: bin edges must be strictly increasing");
    if (d.min_value() < bin_edges.front() || d.max_value() > bin_edges.back())
        throw std::domain_error("coarsen: bins do not cover the support");
    std::vector<typename Distribution<S>::Atom> atoms;
    size_t i = 0;
    for (size_t b = 1; b < bin_edges.size(); ++b) {
        S mass = T::zero(), moment = T::zero();
        while (i < d.size() && d.value(i) <= bin_edges[b]) {
            mass = mass + d.prob(i);
            moment = moment + d.value(i) * d.prob(i);
            ++i;
        }
        if (mass > T::zero()) atoms.push_back({moment / mass, mass});
    }
    return Distribution<S>::from_atoms(std::move(atoms));
}

}  // namespace divrisk
