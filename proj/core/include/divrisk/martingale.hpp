#pragma once

#include "divrisk/joint.hpp"
#include "divrisk/simplex.hpp"

#include <string>

namespace divrisk {

/// Result of a martingale-coupling construction: either a joint whose rows have
/// conditional mean equal to the x value, or an infeasibility reason.
template <class S>
struct MartingaleOutcome {
    std::optional<Joint<S>> joint;
    std::string reason;  // set when infeasible
    bool feasible() const { return joint.has_value(); }
};

namespace detail {

inline std::optional<std::vector<Rat>> martingale_matrix(const ExactDist& dx,
                                                         const ExactDist& dy) {
    const size_t nx = dx.size(), ny = dy.size();
    const size_t nvar = nx * ny;
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    // row sums
    for (size_t i = 0; i < nx; ++i) {
        std::vector<Rat> row(nvar, Rat(0));
        for (size_t j = 0; j < ny; ++j) row[i * ny + j] = 1;
        a.push_back(std::move(row));
        b.push_back(dx.prob(i));
    }
    // column sums
    for (size_t j = 0; j < ny; ++j) {
        std::vector<Rat> row(nvar, Rat(0));
        for (size_t i = 0; i < nx; ++i) row[i * ny + j] = 1;
        a.push_back(std::move(row));
        b.push_back(dy.prob(j));
    }
    // conditional means: sum_j pi_ij (y_j - x_i) = 0
    for (size_t i = 0; i < nx; ++i) {
        std::vector<Rat> row(nvar, Rat(0));
        for (size_t j = 0; j < ny; ++j) row[i * ny + j] = dy.value(j) - dx.value(i);
        a.push_back(std::move(row));
        b.push_back(Rat(0));
    }
    return solve_equality_feasibility(std::move(a), std::move(b));
}

}  // namespace detail

/// Builds a coupling of (dx, dy) with E[Y | X = x] = x for every x atom, when one
/// exists. Existence is equivalent to dx dominating dy in the concave order;
/// any feasible matrix is acceptable.
inline MartingaleOutcome<Rat> martingale_coupling(const ExactDist& dx, const ExactDist& dy) {
    if (dx.mean() != dy.mean()) return {std::nullopt, "mean gap"};
    auto sol = detail::martingale_matrix(dx, dy);
    if (!sol) return {std::nullopt, "no coupling with the required conditional means"};
    const size_t ny = dy.size();
    std::vector<std::vector<Rat>> p(dx.size(), std::vector<Rat>(ny));
    for (size_t i = 0; i < dx.size(); ++i)
        for (size_t j = 0; j < ny; ++j) p[i][j] = (*sol)[i * ny + j];
    auto joint = ExactJoint::from_matrix(dx.values(), dy.values(), std::move(p));
    return {std::move(joint), ""};
}

/// Float-mode variant: lifts the (exactly representable) double inputs to
/// rationals, solves exactly, and converts the coupling back.
inline MartingaleOutcome<double> martingale_coupling(const FloatDist& dx, const FloatDist& dy) {
    std::vector<ExactDist::Atom> ax, ay;
    for (size_t i = 0; i < dx.size(); ++i)
        ax.push_back({rational_from_double(dx.value(i)), rational_from_double(dx.prob(i))});
    for (size_t j = 0; j < dy.size(); ++j)
        ay.push_back({rational_from_double(dy.value(j)), rational_from_double(dy.prob(j))});
    ExactDist ex = ExactDist::from_atoms(std::move(ax));
    ExactDist ey = ExactDist::from_atoms(std::move(ay));
    // means of the lifted inputs may differ by float error that exact equality
    // would reject; shift y by the gap when it is below tolerance
    Rat gap = ex.mean() - ey.mean();
    double range = dx.max_value() - dx.min_value() + dy.max_value() - dy.min_value() + 1.0;
    if (to_double(gap < 0 ? Rat(-gap) : gap) > 1e-9 * range) return {std::nullopt, "mean gap"};
    if (gap != 0) ey = ey.affine(Rat(1), gap);
    auto exact = martingale_coupling(ex, ey);
    if (!exact.feasible()) return {std::nullopt, exact.reason};
    const auto& ej = *exact.joint;
    std::vector<double> xs, ys;
    for (auto& v : ej.x_values()) xs.push_back(to_double(v));
    for (auto& v : ej.y_values()) ys.push_back(to_double(v));
    std::vector<std::vector<double>> p(xs.size(), std::vector<double>(ys.size()));
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) p[i][j] = to_double(ej.probs()[i][j]);
    return {FloatJoint::from_matrix(std::move(xs), std::move(ys), std::move(p)), ""};
}

}  // namespace divrisk
