#pragma once

#include "divrisk/distribution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace divrisk {

/// Verified dependence labels. A Joint never carries a tag its verifier did not pass.
enum class Tag : uint8_t {
    Comonotonic = 0,
    Antimonotonic,
    Independent,
    Exchangeable,
    Nqd,
    Martingale,
    IdMarginals,
};

inline const char* tag_name(Tag t) {
    switch (t) {
        case Tag::Comonotonic: return "comonotonic";
        case Tag::Antimonotonic: return "antimonotonic";
        case Tag::Independent: return "independent";
        case Tag::Exchangeable: return "exchangeable";
        case Tag::Nqd: return "NQD";
        case Tag::Martingale: return "martingale";
        case Tag::IdMarginals: return "ID-marginals";
    }
    return "?";
}

inline std::optional<Tag> tag_from_name(const std::string& s) {
    for (Tag t : {Tag::Comonotonic, Tag::Antimonotonic, Tag::Independent, Tag::Exchangeable,
                  Tag::Nqd, Tag::Martingale, Tag::IdMarginals})
        if (s == tag_name(t)) return t;
    return std::nullopt;
}

/// Joint law of a pair (X, Y) on a finite grid: strictly increasing value axes
/// and a probability matrix with total mass one. Tags are certificates computed
/// by verifiers at construction.
template <class S>
class Joint {
public:
    using Traits = scalar_traits<S>;

    /// Builds from axes and a matrix; drops zero rows/columns, validates mass,
    /// and computes the verified tag set.
    static Joint from_matrix(std::vector<S> xs, std::vector<S> ys,
                             std::vector<std::vector<S>> p) {
        if (xs.empty() || ys.empty() || p.size() != xs.size())
            throw std::domain_error("joint: shape mismatch");
        for (auto& row : p)
            if (row.size() != ys.size()) throw std::domain_error("joint: shape mismatch");
        for (size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i - 1] < xs[i])) throw std::domain_error("joint: x grid not increasing");
        for (size_t j = 1; j < ys.size(); ++j)
            if (!(ys[j - 1] < ys[j])) throw std::domain_error("joint: y grid not increasing");
        S total = Traits::zero();
        for (auto& row : p)
            for (auto& q : row) {
                if (q < Traits::zero()) throw std::domain_error("joint: negative mass");
                total = total + q;
            }
        if constexpr (Traits::exact) {
            if (total != Traits::one()) throw std::domain_error("joint: total mass must be 1");
        } else {
            if (std::fabs(total - 1.0) > 1e-9) throw std::domain_error("joint: total mass must be 1");
            for (auto& row : p)
                for (auto& q : row) q /= total;
        }
        // drop empty rows/cols
        std::vector<size_t> keep_i, keep_j;
        for (size_t i = 0; i < xs.size(); ++i) {
            S s = Traits::zero();
            for (size_t j = 0; j < ys.size(); ++j) s = s + p[i][j];
            if (s > Traits::zero()) keep_i.push_back(i);
        }
        for (size_t j = 0; j < ys.size(); ++j) {
            S s = Traits::zero();
            for (size_t i = 0; i < xs.size(); ++i) s = s + p[i][j];
            if (s > Traits::zero()) keep_j.push_back(j);
        }
        Joint out;
        for (size_t i : keep_i) out.xs_.push_back(xs[i]);
        for (size_t j : keep_j) out.ys_.push_back(ys[j]);
        out.p_.resize(keep_i.size());
        for (size_t a = 0; a < keep_i.size(); ++a) {
            out.p_[a].reserve(keep_j.size());
            for (size_t j : keep_j) out.p_[a].push_back(p[keep_i[a]][j]);
        }
        out.verify_tags();
        return out;
    }

    const std::vector<S>& x_values() const { return xs_; }
    const std::vector<S>& y_values() const { return ys_; }
    const std::vector<std::vector<S>>& probs() const { return p_; }
    uint8_t tag_bits() const { return tags_; }
    bool has_tag(Tag t) const { return tags_ & (1u << static_cast<int>(t)); }

    std::vector<Tag> tags() const {
        std::vector<Tag> out;
        for (Tag t : {Tag::Comonotonic, Tag::Antimonotonic, Tag::Independent, Tag::Exchangeable,
                      Tag::Nqd, Tag::Martingale, Tag::IdMarginals})
            if (has_tag(t)) out.push_back(t);
        return out;
    }

    Distribution<S> x_marginal() const {
        std::vector<typename Distribution<S>::Atom> atoms;
        for (size_t i = 0; i < xs_.size(); ++i) {
            S s = Traits::zero();
            for (size_t j = 0; j < ys_.size(); ++j) s = s + p_[i][j];
            atoms.push_back({xs_[i], s});
        }
        return Distribution<S>::from_atoms(std::move(atoms));
    }

    Distribution<S> y_marginal() const {
        std::vector<typename Distribution<S>::Atom> atoms;
        for (size_t j = 0; j < ys_.size(); ++j) {
            S s = Traits::zero();
            for (size_t i = 0; i < xs_.size(); ++i) s = s + p_[i][j];
            atoms.push_back({ys_[j], s});
        }
        return Distribution<S>::from_atoms(std::move(atoms));
    }

    Joint transpose() const {
        std::vector<std::vector<S>> q(ys_.size(), std::vector<S>(xs_.size(), Traits::zero()));
        for (size_t i = 0; i < xs_.size(); ++i)
            for (size_t j = 0; j < ys_.size(); ++j) q[j][i] = p_[i][j];
        return from_matrix(ys_, xs_, std::move(q));
    }

private:
    void verify_tags() {
        tags_ = 0;
        auto set = [&](Tag t, bool ok) {
            if (ok) tags_ |= static_cast<uint8_t>(1u << static_cast<int>(t));
        };
        set(Tag::Comonotonic, check_monotone(+1));
        set(Tag::Antimonotonic, check_monotone(-1));
        set(Tag::Independent, check_independent());
        set(Tag::IdMarginals, x_marginal() == y_marginal());
        set(Tag::Exchangeable, check_exchangeable());
        set(Tag::Nqd, check_nqd());
        set(Tag::Martingale, check_martingale());
    }

    // sign=+1: (x-x')(y-y') >= 0 on all support pairs; sign=-1: <= 0.
    bool check_monotone(int sign) const {
        std::vector<std::pair<size_t, size_t>> sup;
        for (size_t i = 0; i < xs_.size(); ++i)
            for (size_t j = 0; j < ys_.size(); ++j)
                if (p_[i][j] > Traits::zero()) sup.push_back({i, j});
        for (size_t a = 0; a < sup.size(); ++a)
            for (size_t b = a + 1; b < sup.size(); ++b) {
                // grid values are strictly increasing, so compare indices
                int dx = sup[a].first == sup[b].first ? 0 : (sup[a].first < sup[b].first ? -1 : 1);
                int dy = sup[a].second == sup[b].second ? 0 : (sup[a].second < sup[b].second ? -1 : 1);
                if (dx * dy * sign < 0) return false;
            }
        return true;
    }

    bool check_independent() const {
        auto mx = x_marginal(), my = y_marginal();
        // marginals re-index the non-empty grid, so sizes match by construction
        for (size_t i = 0; i < xs_.size(); ++i)
            for (size_t j = 0; j < ys_.size(); ++j) {
                S want = mx.prob(i) * my.prob(j);
                if constexpr (Traits::exact) {
                    if (p_[i][j] != want) return false;
                } else {
                    if (std::fabs(p_[i][j] - want) > 1e-9) return false;
                }
            }
        return true;
    }

    bool check_exchangeable() const {
        if (xs_ != ys_) return false;
        for (size_t i = 0; i < xs_.size(); ++i)
            for (size_t j = 0; j < i; ++j) {
                if constexpr (Traits::exact) {
                    if (p_[i][j] != p_[j][i]) return false;
                } else {
                    if (std::fabs(p_[i][j] - p_[j][i]) > 1e-9) return false;
                }
            }
        return true;
    }

    bool check_nqd() const {
        auto mx = x_marginal(), my = y_marginal();
        // prefix sums over the grid
        std::vector<std::vector<S>> cum(xs_.size(), std::vector<S>(ys_.size(), Traits::zero()));
        for (size_t i = 0; i < xs_.size(); ++i)
            for (size_t j = 0; j < ys_.size(); ++j) {
                S v = p_[i][j];
                if (i > 0) v = v + cum[i - 1][j];
                if (j > 0) v = v + cum[i][j - 1];
                if (i > 0 && j > 0) v = v - cum[i - 1][j - 1];
                cum[i][j] = v;
            }
        S fx = Traits::zero();
        for (size_t i = 0; i < xs_.size(); ++i) {
            fx = fx + mx.prob(i);
            S fy = Traits::zero();
            for (size_t j = 0; j < ys_.size(); ++j) {
                fy = fy + my.prob(j);
                if constexpr (Traits::exact) {
                    if (cum[i][j] > fx * fy) return false;
                } else {
                    if (cum[i][j] > fx * fy + 1e-9) return false;
                }
            }
        }
        return true;
    }

    bool check_martingale() const {
        for (size_t i = 0; i < xs_.size(); ++i) {
            S mass = Traits::zero(), moment = Traits::zero();
            for (size_t j = 0; j < ys_.size(); ++j) {
                mass = mass + p_[i][j];
                moment = moment + p_[i][j] * ys_[j];
            }
            if (mass == Traits::zero()) continue;
            if constexpr (Traits::exact) {
                if (moment != xs_[i] * mass) return false;
            } else {
                double range = Traits::to_dbl(ys_.back() - ys_.front()) + 1.0;
                if (std::fabs(moment - xs_[i] * mass) > 1e-9 * range) return false;
            }
        }
        return true;
    }

    std::vector<S> xs_, ys_;
    std::vector<std::vector<S>> p_;
    uint8_t tags_ = 0;
};

using ExactJoint = Joint<Rat>;
using FloatJoint = Joint<double>;

namespace detail {

/// Common refinement of cumulative-probability breakpoints, the finite analogue
/// of coupling through a shared uniform variate.
template <class S>
std::vector<S> refine_breakpoints(std::vector<S> a, const std::vector<S>& b) {
    a.insert(a.end(), b.begin(), b.end());
    a.push_back(scalar_traits<S>::one());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::vector<S> out;
    for (auto& t : a)
        if (t > scalar_traits<S>::zero() && t <= scalar_traits<S>::one()) out.push_back(t);
    return out;
}

template <class S>
Joint<S> quantile_coupling(const Distribution<S>& dx, const Distribution<S>& dy, bool reflect_y) {
    using T = scalar_traits<S>;
    const std::vector<S> bx = dx.cumulative();
    const std::vector<S> cy = dy.cumulative();
    std::vector<S> by = cy;
    if (reflect_y) {
        std::vector<S> refl;
        for (auto& c : by) refl.push_back(T::one() - c);
        by = std::move(refl);
    }
    std::vector<S> bp = refine_breakpoints(bx, by);
    std::vector<std::vector<S>> p(dx.size(), std::vector<S>(dy.size(), T::zero()));
    S prev = T::zero();
    size_t ix = 0;
    for (const S& t : bp) {
        S len = t - prev;
        if (len > T::zero()) {
            // Q_X is constant on (prev, t]; advance to the atom covering it
            while (bx[ix] < t) ++ix;
            // Q_Y(u) for u in (prev, t], or Q_Y(1-u) with 1-u spanning [1-t, 1-prev);
            // breakpoints were refined so the quantile is constant over the interval.
            size_t jy = 0;
            S level = reflect_y ? T::one() - prev : t;
            while (cy[jy] < level) ++jy;
            p[ix][jy] = p[ix][jy] + len;
        }
        prev = t;
    }
    return Joint<S>::from_matrix(dx.values(), dy.values(), std::move(p));
}

}  // namespace detail

/// Monotone rearrangement coupling (Q_X(t), Q_Y(t)).
template <class S>
Joint<S> comonotonic_pair(const Distribution<S>& dx, const Distribution<S>& dy) {
    return detail::quantile_coupling(dx, dy, false);
}

/// Opposite rearrangement (Q_X(t), Q_Y(1-t)).
template <class S>
Joint<S> antimonotonic_pair(const Distribution<S>& dx, const Distribution<S>& dy) {
    return detail::quantile_coupling(dx, dy, true);
}

/// Product coupling.
template <class S>
Joint<S> independent_pair(const Distribution<S>& dx, const Distribution<S>& dy) {
    std::vector<std::vector<S>> p(dx.size(), std::vector<S>(dy.size()));
    for (size_t i = 0; i < dx.size(); ++i)
        for (size_t j = 0; j < dy.size(); ++j) p[i][j] = dx.prob(i) * dy.prob(j);
    return Joint<S>::from_matrix(dx.values(), dy.values(), std::move(p));
}

/// (J + transpose(J)) / 2 on the union grid; always exchangeable.
template <class S>
Joint<S> exchange_symmetrize(const Joint<S>& j) {
    using T = scalar_traits<S>;
    std::vector<S> grid = j.x_values();
    grid.insert(grid.end(), j.y_values().begin(), j.y_values().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    auto index_of = [&](const S& v) {
        return static_cast<size_t>(std::lower_bound(grid.begin(), grid.end(), v) - grid.begin());
    };
    std::vector<std::vector<S>> p(grid.size(), std::vector<S>(grid.size(), T::zero()));
    S half = T::one() / T::from_int(2);
    for (size_t i = 0; i < j.x_values().size(); ++i)
        for (size_t k = 0; k < j.y_values().size(); ++k) {
            if (j.probs()[i][k] == T::zero()) continue;
            size_t a = index_of(j.x_values()[i]), b = index_of(j.y_values()[k]);
            p[a][b] = p[a][b] + half * j.probs()[i][k];
            p[b][a] = p[b][a] + half * j.probs()[i][k];
        }
    return Joint<S>::from_matrix(grid, grid, std::move(p));
}

/// Negative quadrant dependence at every grid point.
template <class S>
bool is_nqd(const Joint<S>& j) {
    return j.has_tag(Tag::Nqd);
}

/// Law of lambda*X + (1-lambda)*Y under the coupling.
template <class S>
Distribution<S> convex_combine(const Joint<S>& j, const S& lambda) {
    using T = scalar_traits<S>;
    if (lambda < T::zero() || lambda > T::one())
        throw std::domain_error("convex_combine: lambda must lie in [0,1]");
    std::vector<typename Distribution<S>::Atom> atoms;
    for (size_t i = 0; i < j.x_values().size(); ++i)
        for (size_t k = 0; k < j.y_values().size(); ++k) {
            const S& q = j.probs()[i][k];
            if (q > T::zero())
                atoms.push_back({lambda * j.x_values()[i] + (T::one() - lambda) * j.y_values()[k], q});
        }
    return Distribution<S>::from_atoms(std::move(atoms));
}

/// Law of X + Y under the coupling.
template <class S>
Distribution<S> sum_law(const Joint<S>& j) {
    using T = scalar_traits<S>;
    std::vector<typename Distribution<S>::Atom> atoms;
    for (size_t i = 0; i < j.x_values().size(); ++i)
        for (size_t k = 0; k < j.y_values().size(); ++k) {
            const S& q = j.probs()[i][k];
            if (q > T::zero()) atoms.push_back({j.x_values()[i] + j.y_values()[k], q});
        }
    return Distribution<S>::from_atoms(std::move(atoms));
}

}  // namespace divrisk
