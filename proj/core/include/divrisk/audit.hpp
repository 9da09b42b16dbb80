#pragma once

#include "divrisk/catalog.hpp"
#include "divrisk/iterate.hpp"
#include "divrisk/martingale.hpp"
#include "divrisk/pair_class.hpp"
#include "divrisk/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace divrisk {

/// Search configuration for the audit engine. Identical configs (including the
/// seed) produce byte-identical reports.
struct AuditConfig {
    std::vector<Rat> lambda_grid;  // defaults to {k/16 : 0 <= k <= 16}
    size_t pair_budget = 500;
    uint64_t seed = 0;
    MarginalFamily marginal_family;
    NumericMode mode = NumericMode::exact();

    AuditConfig() {
        for (int k = 0; k <= 16; ++k) lambda_grid.push_back(Rat(k, 16));
    }

    void validate() const {
        if (pair_budget < 1) throw std::domain_error("audit: budget must be >= 1");
        bool has0 = false, has_half = false, has1 = false;
        for (const Rat& l : lambda_grid) {
            if (l < 0 || l > 1) throw std::domain_error("audit: lambda outside [0,1]");
            if (l == 0) has0 = true;
            if (l == Rat(1, 2)) has_half = true;
            if (l == 1) has1 = true;
        }
        if (!has0 || !has_half || !has1)
            throw std::domain_error("audit: lambda grid must contain 0, 1/2 and 1");
    }
};

enum class AuditProperty {
    Diversification,
    AntiDiversification,
    WeakRiskAversion,
    WeakRiskSeeking,
    StrongRiskAversion,
    StrongRiskSeeking,
};

inline constexpr std::array<AuditProperty, 6> all_audit_properties = {
    AuditProperty::Diversification,    AuditProperty::AntiDiversification,
    AuditProperty::WeakRiskAversion,   AuditProperty::WeakRiskSeeking,
    AuditProperty::StrongRiskAversion, AuditProperty::StrongRiskSeeking,
};

inline const char* audit_property_name(AuditProperty p) {
    switch (p) {
        case AuditProperty::Diversification: return "diversification";
        case AuditProperty::AntiDiversification: return "anti-diversification";
        case AuditProperty::WeakRiskAversion: return "weak-risk-aversion";
        case AuditProperty::WeakRiskSeeking: return "weak-risk-seeking";
        case AuditProperty::StrongRiskAversion: return "strong-risk-aversion";
        case AuditProperty::StrongRiskSeeking: return "strong-risk-seeking";
    }
    return "?";
}

inline std::optional<AuditProperty> audit_property_from_name(const std::string& s) {
    for (AuditProperty p : all_audit_properties)
        if (s == audit_property_name(p)) return p;
    return std::nullopt;
}

/// A violation witness that re-verifies standalone: rebuilding the joint and
/// re-evaluating the stored sides must reproduce the comparison.
template <class S>
struct AuditCertificate {
    Distribution<S> x, y;
    std::optional<Joint<S>> joint;  // present for diversification properties
    std::optional<Rat> lambda;      // mix weight, for diversification properties
    std::vector<std::string> left_values, right_values;  // one entry per criterion
    ComparisonResult comparison = ComparisonResult::Incomparable;
};

template <class S>
struct AuditReport {
    AuditProperty property = AuditProperty::Diversification;
    std::optional<PairClass> pair_class;
    std::string preference_dsl;
    bool violated = false;
    std::optional<AuditCertificate<S>> certificate;
    size_t pairs_tested = 0;
    size_t pairs_skipped = 0;  // proposals with no exact equalization, plus infeasible recipes
    AuditConfig config;
};

namespace detail {

template <class S>
NumericMode mode_for(const AuditConfig& cfg) {
    if constexpr (scalar_traits<S>::exact)
        return NumericMode::exact();
    else
        return cfg.mode.is_exact() ? NumericMode::floating() : cfg.mode;
}

/// Fixed distributions seeding every search; the counterexample families the
/// catalog preferences are known to react to.
template <class S>
std::vector<Distribution<S>> canonical_dists() {
    using T = scalar_traits<S>;
    auto r = [](long long n, long long d) { return T::from_rat(Rat(n, d)); };
    std::vector<Distribution<S>> out;
    out.push_back(make_dist<S>({{r(0, 1), r(2, 3)}, {r(3, 1), r(1, 3)}}));
    out.push_back(make_dist<S>({{r(-1, 1), r(1, 2)}, {r(1, 1), r(1, 2)}}));
    out.push_back(make_dist<S>({{r(0, 1), r(1, 2)}, {r(1, 1), r(1, 2)}}));
    out.push_back(make_dist<S>({{r(1, 1), r(1, 2)}, {r(3, 1), r(1, 2)}}));
    out.push_back(make_dist<S>({{r(-3, 2), r(1, 4)}, {r(-1, 2), r(1, 4)}, {r(1, 1), r(1, 2)}}));
    out.push_back(make_dist<S>({{r(-2, 1), r(1, 4)}, {r(0, 1), r(1, 2)}, {r(2, 1), r(1, 4)}}));
    out.push_back(make_dist<S>({{r(-2, 1), r(1, 2)}, {r(2, 1), r(1, 2)}}));
    out.push_back(make_dist<S>({{r(-1, 1), r(1, 2)}, {r(3, 1), r(1, 2)}}));
    out.push_back(Distribution<S>::point_mass(r(1, 1)));
    out.push_back(make_dist<S>({{r(0, 1), r(1, 3)}, {r(3, 2), r(2, 3)}}));
    return out;
}

/// Pairs ordered by construction in the concave order (first >=_cv second).
template <class S>
std::vector<std::pair<Distribution<S>, Distribution<S>>> canonical_cv_pairs() {
    using T = scalar_traits<S>;
    auto r = [](long long n, long long d) { return T::from_rat(Rat(n, d)); };
    std::vector<std::pair<Distribution<S>, Distribution<S>>> out;
    auto coin = make_dist<S>({{r(-1, 1), r(1, 2)}, {r(1, 1), r(1, 2)}});
    out.push_back({coin, make_dist<S>({{r(-3, 2), r(1, 4)}, {r(-1, 2), r(1, 4)}, {r(1, 1), r(1, 2)}})});
    out.push_back({coin, make_dist<S>({{r(-2, 1), r(1, 4)}, {r(0, 1), r(1, 2)}, {r(2, 1), r(1, 4)}})});
    out.push_back({Distribution<S>::point_mass(r(0, 1)), coin});
    out.push_back({Distribution<S>::point_mass(r(1, 1)),
                   make_dist<S>({{r(1, 1), r(1, 2)}, {r(3, 1), r(1, 2)}})});
    out.push_back({make_dist<S>({{r(1, 1), r(1, 2)}, {r(3, 1), r(1, 2)}}),
                   make_dist<S>({{r(0, 1), r(1, 4)}, {r(2, 1), r(1, 2)}, {r(4, 1), r(1, 4)}})});
    return out;
}

/// Exchangeable pair (Y', Y'') whose conditional laws given a martingale
/// coupling of (x, y) are antimonotonically self-coupled; its half-mix is one
/// averaging step closer to x. Both marginals equal y.
template <class S>
std::optional<Joint<S>> conditional_am_pair(const Distribution<S>& x, const Distribution<S>& y) {
    using T = scalar_traits<S>;
    auto mart = martingale_coupling(x, y);
    if (!mart.feasible()) return std::nullopt;
    const Joint<S>& m = *mart.joint;
    std::vector<S> grid = m.y_values();
    std::vector<std::vector<S>> p(grid.size(), std::vector<S>(grid.size(), T::zero()));
    auto index_of = [&](const S& v) {
        return static_cast<size_t>(std::lower_bound(grid.begin(), grid.end(), v) - grid.begin());
    };
    for (size_t i = 0; i < m.x_values().size(); ++i) {
        S mass = T::zero();
        for (size_t k = 0; k < m.y_values().size(); ++k) mass = mass + m.probs()[i][k];
        if (mass == T::zero()) continue;
        std::vector<typename Distribution<S>::Atom> atoms;
        for (size_t k = 0; k < m.y_values().size(); ++k)
            if (m.probs()[i][k] > T::zero())
                atoms.push_back({m.y_values()[k], m.probs()[i][k] / mass});
        auto cond = Distribution<S>::from_atoms(std::move(atoms));
        Joint<S> am = antimonotonic_pair(cond, cond);
        for (size_t a = 0; a < am.x_values().size(); ++a)
            for (size_t b = 0; b < am.y_values().size(); ++b)
                if (am.probs()[a][b] > T::zero()) {
                    size_t ia = index_of(am.x_values()[a]), ib = index_of(am.y_values()[b]);
                    p[ia][ib] = p[ia][ib] + mass * am.probs()[a][b];
                }
    }
    return Joint<S>::from_matrix(grid, grid, std::move(p));
}

/// Random coupling with the given marginals: the product coupling perturbed by
/// mass swaps on rectangles, which preserve both marginals.
template <class S>
Joint<S> random_swap_coupling(RandomSource& rng, const Distribution<S>& dx,
                              const Distribution<S>& dy, int swaps = 8) {
    using T = scalar_traits<S>;
    std::vector<std::vector<S>> p(dx.size(), std::vector<S>(dy.size()));
    for (size_t i = 0; i < dx.size(); ++i)
        for (size_t j = 0; j < dy.size(); ++j) p[i][j] = dx.prob(i) * dy.prob(j);
    if (dx.size() >= 2 && dy.size() >= 2) {
        for (int s = 0; s < swaps; ++s) {
            size_t i1 = static_cast<size_t>(rng.uniform(0, static_cast<long long>(dx.size()) - 1));
            size_t i2 = static_cast<size_t>(rng.uniform(0, static_cast<long long>(dx.size()) - 1));
            size_t j1 = static_cast<size_t>(rng.uniform(0, static_cast<long long>(dy.size()) - 1));
            size_t j2 = static_cast<size_t>(rng.uniform(0, static_cast<long long>(dy.size()) - 1));
            if (i1 == i2 || j1 == j2) continue;
            S cap = std::min(p[i1][j1], p[i2][j2]);
            if (cap == T::zero()) continue;
            S delta = cap * T::from_rat(Rat(rng.uniform(1, 4), 4));
            p[i1][j1] = p[i1][j1] - delta;
            p[i2][j2] = p[i2][j2] - delta;
            p[i1][j2] = p[i1][j2] + delta;
            p[i2][j1] = p[i2][j1] + delta;
        }
    }
    return Joint<S>::from_matrix(dx.values(), dy.values(), std::move(p));
}

/// Mean-zero two-point law with variance v and rational atoms, shifted to m.
/// For any rational c > 0: atoms -c and v/c with masses v/(v+c^2), c^2/(v+c^2).
template <class S>
std::optional<Distribution<S>> variance_matched_partner(const Distribution<S>& d, const Rat& c) {
    using T = scalar_traits<S>;
    S v = d.variance();
    if (!(v > T::zero())) return std::nullopt;
    S cc = T::from_rat(c);
    S m = d.mean();
    S denom = v + cc * cc;
    return make_dist<S>({{m - cc, v / denom}, {m + v / cc, cc * cc / denom}});
}

}  // namespace detail

/// Deterministic stream of joints for a dependence class: canonical
/// counterexample families first, then seeded random recipes. Every emitted
/// joint carries the verified tags of its class.
template <class S>
class PairGenerator {
public:
    PairGenerator(PairClass cls, const AuditConfig& cfg)
        : cls_(cls),
          family_(cfg.marginal_family),
          rng_(cfg.seed * 1315423911ull + static_cast<uint64_t>(cls) + 1) {
        build_canonical();
    }

    /// Next proposal; nullopt when the recipe drawn was infeasible (counted by
    /// the caller as skipped).
    std::optional<Joint<S>> next() {
        if (idx_ < canonical_.size()) return canonical_[idx_++];
        ++idx_;
        return random_joint();
    }

private:
    using D = Distribution<S>;
    using T = scalar_traits<S>;

    void push(std::optional<Joint<S>> j) {
        if (j) canonical_.push_back(std::move(*j));
    }

    std::vector<D> id_partners(const D& d) { return {d}; }

    std::vector<D> free_partners(const D& d) {
        std::vector<D> out;
        out.push_back(d);
        out.push_back(d.affine(T::from_int(-1), T::zero()));  // reflection
        out.push_back(D::point_mass(d.mean()));
        if (auto vm = detail::variance_matched_partner(d, Rat(2))) out.push_back(*vm);
        return out;
    }

    void build_canonical() {
        auto dists = detail::canonical_dists<S>();
        auto couple = [&](const D& a, const D& b, PairClass c) -> std::optional<Joint<S>> {
            switch (c) {
                case PairClass::Comonotonic: return comonotonic_pair(a, b);
                case PairClass::Antimonotonic:
                case PairClass::AmAndId: return antimonotonic_pair(a, b);
                case PairClass::Independent:
                case PairClass::InAndId: return independent_pair(a, b);
                default: return std::nullopt;
            }
        };
        // the constant-against-gamble pair leads the non-ID classes; a constant
        // belongs to every dependence class at once
        const D sure_one = D::point_mass(T::from_int(1));
        const D gamble = make_dist<S>(
            {{T::from_int(1), T::from_rat(Rat(1, 2))}, {T::from_int(3), T::from_rat(Rat(1, 2))}});
        switch (cls_) {
            case PairClass::AmAndId:
            case PairClass::InAndId:
                for (const auto& d : dists) push(couple(d, d, cls_));
                break;
            case PairClass::Comonotonic:
            case PairClass::Antimonotonic:
            case PairClass::Independent:
                push(couple(sure_one, gamble, cls_));
                for (const auto& d : dists)
                    for (const auto& partner : free_partners(d)) push(couple(d, partner, cls_));
                break;
            case PairClass::Id:
            case PairClass::Exchangeable:
                for (const auto& d : dists) {
                    push(antimonotonic_pair(d, d));
                    push(independent_pair(d, d));
                    push(comonotonic_pair(d, d));
                }
                for (const auto& [x, y] : detail::canonical_cv_pairs<S>())
                    push(detail::conditional_am_pair(x, y));
                break;
            case PairClass::All:
                push(antimonotonic_pair(sure_one, gamble));
                for (const auto& d : dists) {
                    push(antimonotonic_pair(d, d));
                    push(independent_pair(d, d));
                    for (const auto& partner : free_partners(d)) {
                        push(comonotonic_pair(d, partner));
                        push(antimonotonic_pair(d, partner));
                        push(independent_pair(d, partner));
                    }
                }
                for (const auto& [x, y] : detail::canonical_cv_pairs<S>())
                    push(detail::conditional_am_pair(x, y));
                break;
        }
    }

    std::optional<Joint<S>> random_joint() {
        D d = random_dist<S>(rng_, family_);
        long long recipe = rng_.uniform(0, 5);
        switch (cls_) {
            case PairClass::AmAndId: return antimonotonic_pair(d, d);
            case PairClass::InAndId: return independent_pair(d, d);
            case PairClass::Comonotonic: return comonotonic_pair(d, random_partner(d, recipe));
            case PairClass::Antimonotonic: return antimonotonic_pair(d, random_partner(d, recipe));
            case PairClass::Independent: return independent_pair(d, random_partner(d, recipe));
            case PairClass::Id:
                switch (recipe % 4) {
                    case 0: return antimonotonic_pair(d, d);
                    case 1: return independent_pair(d, d);
                    case 2: return detail::random_swap_coupling(rng_, d, d);
                    default: return conditional_am_from(d);
                }
            case PairClass::Exchangeable:
                switch (recipe % 4) {
                    case 0: return antimonotonic_pair(d, d);
                    case 1: return independent_pair(d, d);
                    case 2: return exchange_symmetrize(detail::random_swap_coupling(rng_, d, d));
                    default: return conditional_am_from(d);
                }
            case PairClass::All:
                switch (recipe) {
                    case 0: return antimonotonic_pair(d, random_partner(d, rng_.uniform(0, 4)));
                    case 1: return comonotonic_pair(d, random_partner(d, rng_.uniform(0, 4)));
                    case 2: return independent_pair(d, random_partner(d, rng_.uniform(0, 4)));
                    case 3: return detail::random_swap_coupling(rng_, d, random_dist<S>(rng_, family_));
                    case 4: return exchange_symmetrize(detail::random_swap_coupling(
                        rng_, d, random_dist<S>(rng_, family_)));
                    default: return conditional_am_from(d);
                }
        }
        return std::nullopt;
    }

    D random_partner(const D& d, long long recipe) {
        switch (recipe) {
            case 0: return d;
            case 1: return d.affine(T::from_int(-1), T::zero());
            case 2: return D::point_mass(d.mean());
            case 3: {
                auto vm = detail::variance_matched_partner(d, Rat(rng_.uniform(1, 4)));
                if (vm) return *vm;
                return random_dist<S>(rng_, family_);
            }
            default: return random_dist<S>(rng_, family_);
        }
    }

    /// Exchangeable ID joint from a coarsening-based martingale pair of d.
    std::optional<Joint<S>> conditional_am_from(const D& d) {
        if (d.size() < 2) return antimonotonic_pair(d, d);
        // one- or two-bin coarsening gives x >=_cv d
        S lo = d.min_value(), hi = d.max_value();
        std::vector<S> edges = {lo, hi};
        if (d.size() > 2 && rng_.coin()) {
            size_t cut = static_cast<size_t>(rng_.uniform(0, static_cast<long long>(d.size()) - 2));
            edges = {lo, d.value(cut), hi};
            if (!(edges[0] < edges[1] && edges[1] < edges[2])) edges = {lo, hi};
        }
        D x = coarsen(d, edges);
        return detail::conditional_am_pair(x, d);
    }

    PairClass cls_;
    MarginalFamily family_;
    RandomSource rng_;
    std::vector<Joint<S>> canonical_;
    size_t idx_ = 0;
};

namespace detail {

template <class S>
Joint<S> shift_y(const Joint<S>& j, const S& c) {
    std::vector<S> ys = j.y_values();
    for (auto& v : ys) v = v + c;
    return Joint<S>::from_matrix(j.x_values(), ys, j.probs());
}

/// Equalizes a proposal to an exactly equivalent pair: by law invariance when
/// the marginals coincide, otherwise by scanning shift candidates of the Y
/// marginal. Returns nullopt when no exact equality is found (caller counts it
/// as skipped).
template <class S>
std::optional<Joint<S>> equalize_pair(const Preference& pref, const Joint<S>& j, PairClass cls,
                                      const NumericMode& mode) {
    using T = scalar_traits<S>;
    Distribution<S> mx = j.x_marginal(), my = j.y_marginal();
    if (compare(pref, mx, my, mode) == ComparisonResult::Equivalent) return j;
    // identically-distributed classes admit no shift
    if (cls == PairClass::Id || cls == PairClass::AmAndId || cls == PairClass::InAndId ||
        cls == PairClass::Exchangeable)
        return std::nullopt;
    std::vector<S> candidates;
    if (pref.is_total()) {
        Value ux = evaluate(pref.criteria()[0].spec, mx);
        Value uy = evaluate(pref.criteria()[0].spec, my);
        if constexpr (T::exact) {
            if (ux.is_exact() && uy.is_exact()) candidates.push_back(ux.exact() - uy.exact());
        } else {
            candidates.push_back(ux.approx() - uy.approx());
        }
    }
    candidates.push_back(mx.mean() - my.mean());
    candidates.push_back(T::zero() - mx.mean() - my.mean());
    for (const S& c : candidates) {
        Joint<S> shifted = shift_y(j, c);
        if (compare(pref, shifted.x_marginal(), shifted.y_marginal(), mode) ==
            ComparisonResult::Equivalent)
            return shifted;
    }
    return std::nullopt;
}

inline bool violates(ComparisonResult r) {
    return r == ComparisonResult::StrictlyWorse || r == ComparisonResult::Incomparable;
}

/// Scan order for the mix weights: 1/2 first (where the canonical
/// counterexamples live), then the rest ascending.
inline std::vector<Rat> lambda_scan_order(const std::vector<Rat>& grid) {
    std::vector<Rat> out;
    for (const Rat& l : grid)
        if (l == Rat(1, 2)) out.push_back(l);
    for (const Rat& l : grid)
        if (l != Rat(1, 2)) out.push_back(l);
    return out;
}

template <class S>
std::vector<std::string> criterion_values(const Preference& pref, const Distribution<S>& d) {
    std::vector<std::string> out;
    for (const auto& c : pref.criteria()) out.push_back(evaluate(c.spec, d).str());
    return out;
}

}  // namespace detail

/// Searches for a violation of diversification on the class: for equivalent
/// pairs, every mix must be weakly preferred to Y.
template <class S>
AuditReport<S> check_diversification(const Preference& pref, const std::string& pref_dsl,
                                     PairClass cls, const AuditConfig& cfg) {
    cfg.validate();
    NumericMode mode = detail::mode_for<S>(cfg);
    AuditReport<S> rep;
    rep.property = AuditProperty::Diversification;
    rep.pair_class = cls;
    rep.preference_dsl = pref_dsl;
    rep.config = cfg;
    PairGenerator<S> gen(cls, cfg);
    for (size_t n = 0; n < cfg.pair_budget; ++n) {
        auto j0 = gen.next();
        if (!j0) {
            ++rep.pairs_skipped;
            continue;
        }
        auto jeq = detail::equalize_pair(pref, *j0, cls, mode);
        if (!jeq) {
            ++rep.pairs_skipped;
            continue;
        }
        ++rep.pairs_tested;
        Distribution<S> mx = jeq->x_marginal(), my = jeq->y_marginal();
        for (const Rat& lr : detail::lambda_scan_order(cfg.lambda_grid)) {
            S lambda = scalar_traits<S>::from_rat(lr);
            Distribution<S> mix = convex_combine(*jeq, lambda);
            ComparisonResult r = compare(pref, mix, my, mode);
            if (detail::violates(r)) {
                rep.violated = true;
                rep.certificate = AuditCertificate<S>{
                    mx, my, *jeq, lr,
                    detail::criterion_values(pref, mix),
                    detail::criterion_values(pref, my), r};
                return rep;
            }
        }
    }
    return rep;
}

/// Anti-diversification: X must be weakly preferred to every mix.
template <class S>
AuditReport<S> check_anti_diversification(const Preference& pref, const std::string& pref_dsl,
                                          PairClass cls, const AuditConfig& cfg) {
    cfg.validate();
    NumericMode mode = detail::mode_for<S>(cfg);
    AuditReport<S> rep;
    rep.property = AuditProperty::AntiDiversification;
    rep.pair_class = cls;
    rep.preference_dsl = pref_dsl;
    rep.config = cfg;
    PairGenerator<S> gen(cls, cfg);
    for (size_t n = 0; n < cfg.pair_budget; ++n) {
        auto j0 = gen.next();
        if (!j0) {
            ++rep.pairs_skipped;
            continue;
        }
        auto jeq = detail::equalize_pair(pref, *j0, cls, mode);
        if (!jeq) {
            ++rep.pairs_skipped;
            continue;
        }
        ++rep.pairs_tested;
        Distribution<S> mx = jeq->x_marginal(), my = jeq->y_marginal();
        for (const Rat& lr : detail::lambda_scan_order(cfg.lambda_grid)) {
            S lambda = scalar_traits<S>::from_rat(lr);
            Distribution<S> mix = convex_combine(*jeq, lambda);
            ComparisonResult r = compare(pref, mx, mix, mode);
            if (detail::violates(r)) {
                rep.violated = true;
                rep.certificate = AuditCertificate<S>{
                    mx, my, *jeq, lr,
                    detail::criterion_values(pref, mx),
                    detail::criterion_values(pref, mix), r};
                return rep;
            }
        }
    }
    return rep;
}

/// Weak risk aversion: the sure mean must be weakly preferred to the gamble.
/// Weak risk seeking reverses the roles.
template <class S>
AuditReport<S> check_weak_risk_attitude(const Preference& pref, const std::string& pref_dsl,
                                        bool seeking, const AuditConfig& cfg) {
    cfg.validate();
    NumericMode mode = detail::mode_for<S>(cfg);
    AuditReport<S> rep;
    rep.property = seeking ? AuditProperty::WeakRiskSeeking : AuditProperty::WeakRiskAversion;
    rep.preference_dsl = pref_dsl;
    rep.config = cfg;
    RandomSource rng(cfg.seed * 2654435761ull + (seeking ? 77 : 7));
    auto canonical = detail::canonical_dists<S>();
    for (size_t n = 0; n < cfg.pair_budget; ++n) {
        Distribution<S> d =
            n < canonical.size() ? canonical[n] : random_dist<S>(rng, cfg.marginal_family);
        ++rep.pairs_tested;
        Distribution<S> sure = Distribution<S>::point_mass(d.mean());
        const Distribution<S>& a = seeking ? d : sure;
        const Distribution<S>& b = seeking ? sure : d;
        ComparisonResult r = compare(pref, a, b, mode);
        if (detail::violates(r)) {
            rep.violated = true;
            rep.certificate = AuditCertificate<S>{
                a, b, std::nullopt, std::nullopt,
                detail::criterion_values(pref, a), detail::criterion_values(pref, b), r};
            return rep;
        }
    }
    return rep;
}

/// Strong risk aversion: X >=_cv Y must imply X weakly preferred to Y; pairs
/// are generated by spreads and coarsenings and cross-verified by the order
/// test. Strong risk seeking reverses the required preference.
template <class S>
AuditReport<S> check_strong_risk_attitude(const Preference& pref, const std::string& pref_dsl,
                                          bool seeking, const AuditConfig& cfg) {
    using T = scalar_traits<S>;
    cfg.validate();
    NumericMode mode = detail::mode_for<S>(cfg);
    AuditReport<S> rep;
    rep.property = seeking ? AuditProperty::StrongRiskSeeking : AuditProperty::StrongRiskAversion;
    rep.preference_dsl = pref_dsl;
    rep.config = cfg;
    RandomSource rng(cfg.seed * 0x9e3779b97f4a7c15ull + (seeking ? 5 : 3));
    auto canonical = detail::canonical_cv_pairs<S>();
    for (size_t n = 0; n < cfg.pair_budget; ++n) {
        std::optional<std::pair<Distribution<S>, Distribution<S>>> pair;
        if (n < canonical.size()) {
            pair = canonical[n];
        } else {
            Distribution<S> d = random_dist<S>(rng, cfg.marginal_family);
            switch (rng.uniform(0, 3)) {
                case 0: {  // single spread
                    size_t i = static_cast<size_t>(rng.uniform(0, static_cast<long long>(d.size()) - 1));
                    S delta = T::from_rat(Rat(rng.uniform(1, 8), 4));
                    S split = T::from_rat(Rat(rng.uniform(1, 3), 4));
                    pair = {d, mean_preserving_spread(d, i, delta, split)};
                    break;
                }
                case 1: {  // chained spreads
                    Distribution<S> y = d;
                    for (int k = 0; k < 2; ++k) {
                        size_t i = static_cast<size_t>(rng.uniform(0, static_cast<long long>(y.size()) - 1));
                        y = mean_preserving_spread(y, i, T::from_rat(Rat(rng.uniform(1, 4), 4)),
                                                   T::from_rat(Rat(1, 2)));
                    }
                    pair = {d, y};
                    break;
                }
                case 2:  // total coarsening
                    pair = {Distribution<S>::point_mass(d.mean()), d};
                    break;
                default: {
                    if (d.size() >= 2) {
                        std::vector<S> edges = {d.min_value(), d.max_value()};
                        pair = {coarsen(d, edges), d};
                    } else {
                        pair = {d, d};
                    }
                    break;
                }
            }
        }
        if (!concave_order_geq(pair->first, pair->second, mode.epsilon).geq) {
            ++rep.pairs_skipped;  // generator contract violated; never expected
            continue;
        }
        ++rep.pairs_tested;
        const Distribution<S>& a = seeking ? pair->second : pair->first;
        const Distribution<S>& b = seeking ? pair->first : pair->second;
        ComparisonResult r = compare(pref, a, b, mode);
        if (detail::violates(r)) {
            rep.violated = true;
            rep.certificate = AuditCertificate<S>{
                a, b, std::nullopt, std::nullopt,
                detail::criterion_values(pref, a), detail::criterion_values(pref, b), r};
            return rep;
        }
    }
    return rep;
}

/// Re-verifies a violated report from its certificate alone: marginals and the
/// joint are rebuilt, both sides re-evaluated, and the comparison re-run.
template <class S>
bool verify_certificate(const Preference& pref, const AuditReport<S>& rep) {
    if (!rep.violated || !rep.certificate) return false;
    const auto& cert = *rep.certificate;
    NumericMode mode = detail::mode_for<S>(rep.config);
    Distribution<S> left_dist = cert.x, right_dist = cert.y;
    if (rep.property == AuditProperty::Diversification ||
        rep.property == AuditProperty::AntiDiversification) {
        if (!cert.joint || !cert.lambda) return false;
        // rebuild the joint from raw data; from_matrix re-verifies tags
        Joint<S> rebuilt =
            Joint<S>::from_matrix(cert.joint->x_values(), cert.joint->y_values(), cert.joint->probs());
        if (rebuilt.tag_bits() != cert.joint->tag_bits()) return false;
        if (!(rebuilt.x_marginal() == cert.x && rebuilt.y_marginal() == cert.y)) return false;
        if (compare(pref, cert.x, cert.y, mode) != ComparisonResult::Equivalent) return false;
        Distribution<S> mix = convex_combine(rebuilt, scalar_traits<S>::from_rat(*cert.lambda));
        if (rep.property == AuditProperty::Diversification) {
            left_dist = mix;
            right_dist = cert.y;
        } else {
            left_dist = cert.x;
            right_dist = mix;
        }
    }
    if (compare(pref, left_dist, right_dist, mode) != cert.comparison) return false;
    if (detail::criterion_values(pref, left_dist) != cert.left_values) return false;
    if (detail::criterion_values(pref, right_dist) != cert.right_values) return false;
    return detail::violates(cert.comparison);
}

/// One matrix cell: the audited verdict against the catalog expectation.
struct MatrixCell {
    AuditProperty property;
    std::optional<PairClass> pair_class;
    bool violated = false;
    bool expected_violated = false;
    bool match() const { return violated == expected_violated; }
    std::string certificate_summary;               // filled when violated
    std::shared_ptr<const AuditReport<Rat>> report;  // full report for re-verification
};

struct MatrixRow {
    std::string preference;
    std::vector<MatrixCell> cells;
    std::vector<std::string> notes;
};

struct MatrixReport {
    std::vector<MatrixRow> rows;
    std::vector<std::string> mismatches;          // hard failures
    std::vector<std::string> consistency_failures;  // theorem cross-checks
    AuditConfig config;
    bool ok() const { return mismatches.empty() && consistency_failures.empty(); }
};

/// Runs every check for every catalog preference and cross-checks the verdict
/// table against the expected profiles and the structural implications.
MatrixReport implication_matrix(const AuditConfig& cfg);

}  // namespace divrisk
