#pragma once

#include "divrisk/rational.hpp"

#include <optional>
#include <vector>

namespace divrisk {

/// Phase-1 simplex over exact rationals: find x >= 0 with A x = b, or report
/// infeasibility. Bland's rule, so termination is guaranteed. Intended for
/// desk-scale systems (hundreds of variables).
inline std::optional<std::vector<Rat>> solve_equality_feasibility(
    std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
    const size_t m = a.size();
    if (m == 0) return std::vector<Rat>{};
    const size_t n = a[0].size();
    for (auto& row : a)
        if (row.size() != n) throw std::invalid_argument("simplex: ragged matrix");
    if (b.size() != m) throw std::invalid_argument("simplex: rhs size mismatch");

    for (size_t i = 0; i < m; ++i) {
        if (b[i] < 0) {
            b[i] = -b[i];
            for (auto& v : a[i]) v = -v;
        }
    }

    // tableau: n structural + m artificial columns + rhs
    std::vector<std::vector<Rat>> t(m, std::vector<Rat>(n + m + 1, Rat(0)));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1;
        t[i][n + m] = b[i];
    }
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;

    // reduced-cost row for minimizing the artificial sum
    std::vector<Rat> d(n + m + 1, Rat(0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j <= n + m; ++j) d[j] += t[i][j];

    while (true) {
        size_t enter = n + m;
        for (size_t j = 0; j < n; ++j) {
            if (d[j] > 0) { enter = j; break; }  // Bland: smallest eligible index
        }
        if (enter == n + m) break;
        size_t leave = m;
        Rat best_ratio(0);
        for (size_t i = 0; i < m; ++i) {
            if (t[i][enter] > 0) {
                Rat ratio = t[i][n + m] / t[i][enter];
                if (leave == m || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == m) return std::nullopt;  // unbounded cannot happen here; defensive
        const Rat piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            const Rat f = t[i][enter];
            if (f == 0) continue;
            for (size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        const Rat fd = d[enter];
        if (fd != 0)
            for (size_t j = 0; j <= n + m; ++j) d[j] -= fd * t[leave][j];
        basis[leave] = enter;
    }

    if (d[n + m] != 0) return std::nullopt;  // artificial mass remains

    std::vector<Rat> x(n, Rat(0));
    for (size_t i = 0; i < m; ++i) {
        if (basis[i] < n) x[basis[i]] = t[i][n + m];
        else if (t[i][n + m] != 0) return std::nullopt;  // nonzero basic artificial
    }
    return x;
}

}  // namespace divrisk
