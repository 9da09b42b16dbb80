#pragma once

#include "divrisk/joint.hpp"
#include "divrisk/orders.hpp"

#include <vector>

namespace divrisk {

enum class CouplingMode { Antimonotonic, Independent };

inline const char* coupling_mode_name(CouplingMode m) {
    return m == CouplingMode::Antimonotonic ? "antimonotonic" : "independent";
}

/// One averaging step. Antimonotonic mode returns the law of
/// (Q(U) + Q(1-U)) / 2 by exact pairing of quantile-step intervals; the range
/// at least halves. Independent mode returns the law of (X + X') / 2 for
/// independent copies (exact convolution). Both preserve the mean exactly.
template <class S>
Distribution<S> symmetrization_step(const Distribution<S>& d, CouplingMode mode) {
    using T = scalar_traits<S>;
    if (mode == CouplingMode::Independent) {
        std::vector<typename Distribution<S>::Atom> atoms;
        S half = T::one() / T::from_int(2);
        atoms.reserve(d.size() * d.size());
        for (size_t i = 0; i < d.size(); ++i)
            for (size_t j = 0; j < d.size(); ++j)
                atoms.push_back({(d.value(i) + d.value(j)) * half, d.prob(i) * d.prob(j)});
        return Distribution<S>::from_atoms(std::move(atoms));
    }
    // Pair the breakpoint refinement of t and 1-t.
    const std::vector<S> cum = d.cumulative();
    std::vector<S> reflected;
    for (const S& c : cum) reflected.push_back(T::one() - c);
    std::vector<S> bp = detail::refine_breakpoints(cum, reflected);
    std::vector<typename Distribution<S>::Atom> atoms;
    S prev = T::zero();
    size_t iu = 0;
    S half = T::one() / T::from_int(2);
    for (const S& t : bp) {
        S len = t - prev;
        if (len > T::zero()) {
            while (cum[iu] < t) ++iu;  // Q on (prev, t]
            size_t ir = 0;             // Q at levels (1-t, 1-prev)
            S level = T::one() - prev;
            while (cum[ir] < level) ++ir;
            atoms.push_back({(d.value(iu) + d.value(ir)) * half, len});
        }
        prev = t;
    }
    return Distribution<S>::from_atoms(std::move(atoms));
}

/// Trace of an averaging sequence: per-step distribution, range, and distances
/// to the (conserved) mean.
template <class S>
struct IterationTrace {
    struct Step {
        Distribution<S> dist;
        S range_width;
        S sup_distance_to_mean;
        Value lp_distance_to_mean;  // exact for integer p on exact inputs
        bool coarsened = false;
    };
    std::vector<Step> steps;
    Rat p{2};
    CouplingMode mode = CouplingMode::Antimonotonic;
};

namespace detail {

/// ||X - m||_p; exact rational for integer p in exact mode (p-th power root left
/// as the p-th power when irrational would be needed: we report the distance,
/// taking the root through Value).
template <class S>
Value lp_distance_to(const Distribution<S>& d, const S& target, const Rat& p) {
    using T = scalar_traits<S>;
    if (is_integer(p)) {
        long long ip = numerator(p).convert_to<long long>();
        S acc = T::zero();
        for (size_t i = 0; i < d.size(); ++i) {
            S dev = T::abs(d.value(i) - target);
            S pw = T::one();
            for (long long k = 0; k < ip; ++k) pw = pw * dev;
            acc = acc + pw * d.prob(i);
        }
        return T::value(acc).pow(Rat(1) / p);
    }
    double acc = 0;
    for (size_t i = 0; i < d.size(); ++i)
        acc += std::pow(T::to_dbl(T::abs(d.value(i) - target)), to_double(p)) * T::to_dbl(d.prob(i));
    return Value::from_double(std::pow(acc, 1.0 / to_double(p)));
}

template <class S>
typename IterationTrace<S>::Step make_step(const Distribution<S>& d, const S& mean0, const Rat& p,
                                           bool coarsened) {
    using T = scalar_traits<S>;
    S sup = std::max(T::abs(d.max_value() - mean0), T::abs(d.min_value() - mean0));
    return {d, d.range_width(), sup, lp_distance_to(d, mean0, p), coarsened};
}

}  // namespace detail

inline constexpr size_t kIndependentSupportCap = 4096;

/// Runs n steps of the chosen mode. Mean conservation is asserted at every step.
/// Independent mode coarsens past the support cap (flagged in the trace) with a
/// bin width keeping the induced Lp perturbation under 1e-6.
template <class S>
IterationTrace<S> run_sequence(const Distribution<S>& d, CouplingMode mode, size_t n_steps,
                               const Rat& p = Rat(2)) {
    using T = scalar_traits<S>;
    if (p < 1) throw std::domain_error("run_sequence: p must be >= 1");
    IterationTrace<S> trace;
    trace.p = p;
    trace.mode = mode;
    const S mean0 = d.mean();
    trace.steps.push_back(detail::make_step(d, mean0, p, false));
    Distribution<S> cur = d;
    for (size_t n = 0; n < n_steps; ++n) {
        Distribution<S> next = symmetrization_step(cur, mode);
        bool coarse = false;
        if (mode == CouplingMode::Independent && next.size() > kIndependentSupportCap) {
            // cluster atoms within a 1e-6 window; each atom moves by at most the
            // window, so the induced Lp perturbation stays within 1e-6
            const S w = T::from_rat(Rat(1, 1000000));
            std::vector<typename Distribution<S>::Atom> atoms;
            size_t i = 0;
            while (i < next.size()) {
                S mass = T::zero(), moment = T::zero();
                const S start = next.value(i);
                while (i < next.size() && next.value(i) - start <= w) {
                    mass = mass + next.prob(i);
                    moment = moment + next.value(i) * next.prob(i);
                    ++i;
                }
                atoms.push_back({moment / mass, mass});
            }
            next = Distribution<S>::from_atoms(std::move(atoms));
            coarse = true;
        }
        if constexpr (T::exact) {
            if (next.mean() != mean0) throw std::logic_error("mean not conserved");
        }
        if (mode == CouplingMode::Antimonotonic) {
            if constexpr (T::exact) {
                if (next.range_width() * Rat(2) > cur.range_width())
                    throw std::logic_error("range did not halve");
            }
        }
        trace.steps.push_back(detail::make_step(next, mean0, p, coarse));
        cur = std::move(next);
    }
    return trace;
}

/// Per-row antimonotonic symmetrization of the conditional laws of Y - x under a
/// martingale coupling; returns the sequence of unconditional laws of Y_n, which
/// converges to the law of X. Requires the verified martingale tag.
template <class S>
std::vector<Distribution<S>> conditional_symmetrization(const Joint<S>& j, size_t n_steps) {
    using T = scalar_traits<S>;
    if (!j.has_tag(Tag::Martingale))
        throw std::domain_error("conditional symmetrization requires a martingale coupling");
    // conditional laws of Z = Y - x per x row
    std::vector<S> row_mass;
    std::vector<Distribution<S>> rows;
    for (size_t i = 0; i < j.x_values().size(); ++i) {
        S mass = T::zero();
        for (size_t k = 0; k < j.y_values().size(); ++k) mass = mass + j.probs()[i][k];
        if (mass == T::zero()) continue;
        std::vector<typename Distribution<S>::Atom> atoms;
        for (size_t k = 0; k < j.y_values().size(); ++k)
            if (j.probs()[i][k] > T::zero())
                atoms.push_back({j.y_values()[k] - j.x_values()[i], j.probs()[i][k] / mass});
        rows.push_back(Distribution<S>::from_atoms(std::move(atoms)));
        row_mass.push_back(mass);
    }
    std::vector<S> xs;
    for (size_t i = 0; i < j.x_values().size(); ++i) {
        S mass = T::zero();
        for (size_t k = 0; k < j.y_values().size(); ++k) mass = mass + j.probs()[i][k];
        if (mass > T::zero()) xs.push_back(j.x_values()[i]);
    }
    auto mixture = [&]() {
        std::vector<typename Distribution<S>::Atom> atoms;
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t a = 0; a < rows[r].size(); ++a)
                atoms.push_back({xs[r] + rows[r].value(a), row_mass[r] * rows[r].prob(a)});
        return Distribution<S>::from_atoms(std::move(atoms));
    };
    std::vector<Distribution<S>> out;
    out.push_back(mixture());
    for (size_t n = 0; n < n_steps; ++n) {
        for (auto& row : rows) {
            row = symmetrization_step(row, CouplingMode::Antimonotonic);
            if constexpr (T::exact) {
                if (row.mean() != T::zero()) throw std::logic_error("conditional mean drifted");
            }
        }
        out.push_back(mixture());
    }
    return out;
}

/// Exact law of the i.i.d. dyadic average of 2^n copies, with Lp distances to
/// the mean per step. Identical to the independent-mode sequence, kept as a
/// separate entry point for baseline comparisons.
template <class S>
IterationTrace<S> dyadic_baseline(const Distribution<S>& d, size_t n, const Rat& p = Rat(2)) {
    return run_sequence(d, CouplingMode::Independent, n, p);
}

}  // namespace divrisk
