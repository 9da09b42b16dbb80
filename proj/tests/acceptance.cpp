// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance and budget is pinned here.

#include "divrisk/audit.hpp"
#include "divrisk/dsl.hpp"
#include "divrisk/json_io.hpp"

#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace divrisk;

namespace {

int g_failures = 0;

double run_criterion(int num, const std::string& name, const std::function<bool(std::string&)>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", num, name.c_str(), secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
    return secs;
}

ExactDist dist(std::vector<std::pair<Rat, Rat>> atoms) {
    return make_dist<Rat>(std::move(atoms));
}

const ExactDist kGolden = dist({{Rat(0), Rat(2, 3)}, {Rat(3), Rat(1, 3)}});
const ExactDist kCoin = dist({{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}});
const ExactDist kSpreadY =
    dist({{Rat(-3, 2), Rat(1, 4)}, {Rat(-1, 2), Rat(1, 4)}, {Rat(1), Rat(1, 2)}});

std::vector<AuditReport<Rat>> g_reports;  // violated reports collected for criterion 10

bool check(bool cond, std::string& detail, const std::string& msg) {
    if (!cond && detail.empty()) detail = msg;
    return cond;
}

}  // namespace

int main() {
    AuditConfig cfg500;
    cfg500.pair_budget = 500;

    double t1 = run_criterion(1, "golden violation of diversification on AM and ID pairs",
        [&](std::string& detail) {
            const auto& e = catalog_entry("WeirdVar");
            Value ux = evaluate(e.preference.criteria()[0].spec, kGolden);
            ExactDist z = convex_combine(antimonotonic_pair(kGolden, kGolden), Rat(1, 2));
            Value uz = evaluate(e.preference.criteria()[0].spec, z);
            bool ok = check(ux.is_exact() && ux.exact() == Rat(1), detail, "U(X) != 1");
            ok &= check(uz.is_exact() && uz.exact() == Rat(1, 4), detail, "U(Z) != 1/4");
            auto rep = check_diversification<Rat>(e.preference, e.dsl, PairClass::AmAndId, cfg500);
            ok &= check(rep.violated, detail, "no violation found");
            if (rep.violated) {
                g_reports.push_back(rep);
                const auto& c = *rep.certificate;
                ok &= check(c.right_values == std::vector<std::string>{"1"}, detail,
                            "certificate right value not exactly 1");
                ok &= check(c.left_values == std::vector<std::string>{"1/4"}, detail,
                            "certificate left value not exactly 1/4");
                ok &= check(c.x == kGolden && c.y == kGolden && *c.lambda == Rat(1, 2), detail,
                            "certificate marginals/lambda differ from the golden pair");
            }
            return ok;
        });
    if (t1 >= 1.0) {
        std::printf("FAIL criterion  1 runtime bound: %.2fs >= 1s\n", t1);
        ++g_failures;
    }

    run_criterion(2, "constant-vs-gamble violation for the quarter-power preference",
        [&](std::string& detail) {
            const auto& e = catalog_entry("MeanVarQuarter");
            auto rep = check_diversification<Rat>(e.preference, e.dsl, PairClass::Antimonotonic, cfg500);
            bool ok = check(rep.violated, detail, "no violation found");
            if (rep.violated) {
                g_reports.push_back(rep);
                const auto& c = *rep.certificate;
                ok &= check(c.x == ExactDist::point_mass(Rat(1)), detail, "X is not the unit constant");
                ok &= check(c.y == dist({{Rat(1), Rat(1, 2)}, {Rat(3), Rat(1, 2)}}), detail,
                            "Y is not the 1/3 gamble");
                ok &= check(*c.lambda == Rat(1, 2), detail, "lambda is not 1/2");
                ok &= check(c.right_values == std::vector<std::string>{"1"}, detail,
                            "U(Y) not exactly 1");
                double mixval = std::stod(c.left_values[0]);
                ok &= check(std::fabs(mixval - (1.5 - std::sqrt(0.5))) <= 1e-12, detail,
                            "mix value not within 1e-12 of 3/2 - (1/2)^{1/2}");
            }
            auto sra = check_strong_risk_attitude<Rat>(e.preference, e.dsl, false, cfg500);
            ok &= check(!sra.violated, detail, "strong risk aversion unexpectedly violated");
            ok &= check(sra.pairs_tested >= 500, detail, "strong-RA budget not exhausted");
            return ok;
        });

    run_criterion(3, "golden violation on independent and ID pairs",
        [&](std::string& detail) {
            const auto& e = catalog_entry("WeirdVar");
            auto rep = check_diversification<Rat>(e.preference, e.dsl, PairClass::InAndId, cfg500);
            bool ok = check(rep.violated, detail, "no violation found");
            if (rep.violated) {
                g_reports.push_back(rep);
                ok &= check(rep.certificate->right_values == std::vector<std::string>{"1"} &&
                                rep.certificate->left_values == std::vector<std::string>{"0"},
                            detail, "certificate values not exactly (1, 0)");
            }
            return ok;
        });

    run_criterion(4, "exp-moment ratio: order, oracle value, strong-RA violation, mixing bound",
        [&](std::string& detail) {
            bool ok = check(concave_order_geq(kCoin, kSpreadY).geq, detail,
                            "coin does not dominate its spread");
            const auto& e = catalog_entry("ExpRatio");
            double vx = evaluate(e.preference.criteria()[0].spec, kCoin).approx();
            double vy = evaluate(e.preference.criteria()[0].spec, kSpreadY).approx();
            // independent oracle: direct sums
            double ox = (std::exp(2.0) + std::exp(-2.0)) / (std::exp(1.0) + std::exp(-1.0));
            double oy = (std::exp(-3.0) / 4 + std::exp(-1.0) / 4 + std::exp(2.0) / 2) /
                        (std::exp(-1.5) / 4 + std::exp(-0.5) / 4 + std::exp(1.0) / 2);
            ok &= check(std::fabs(vx - ox) <= 1e-12 * ox, detail, "V(X) off the oracle sum");
            ok &= check(std::fabs(vx - std::cosh(2.0) / std::cosh(1.0)) <= 1e-12, detail,
                        "V(X) != cosh(2)/cosh(1)");
            ok &= check(std::fabs(vy - oy) <= 1e-12 * oy, detail, "V(Y) off the oracle sum");
            ok &= check(vx > vy, detail, "V(X) > V(Y) fails");
            auto sra = check_strong_risk_attitude<Rat>(e.preference, e.dsl, false, cfg500);
            ok &= check(sra.violated, detail, "strong-RA audit found no violation");
            if (sra.violated) g_reports.push_back(sra);
            // geometric mixing bound on 200 seeded independent pairs
            RandomSource rng(404);
            MarginalFamily fam;
            fam.value_num_range = 6;
            int bad = 0;
            for (int rep = 0; rep < 200; ++rep) {
                ExactDist a = random_exact_dist(rng, fam);
                ExactDist b = random_exact_dist(rng, fam);
                auto j = independent_pair(a, b);
                double va = evaluate(e.preference.criteria()[0].spec, a).approx();
                double vb = evaluate(e.preference.criteria()[0].spec, b).approx();
                for (int num = 0; num <= 16; ++num) {
                    double lam = num / 16.0;
                    double vm =
                        evaluate(e.preference.criteria()[0].spec, convex_combine(j, Rat(num, 16)))
                            .approx();
                    double bound = std::pow(va, lam) * std::pow(vb, 1.0 - lam);
                    if (bound - vm < -1e-12 * std::max(1.0, bound)) ++bad;
                }
            }
            ok &= check(bad == 0, detail, "geometric mixing bound failed " + std::to_string(bad) + " times");
            return ok;
        });

    double t5 = run_criterion(5, "range halving on 1000 seeded distributions over 40 steps",
        [&](std::string& detail) {
            RandomSource rng(505);
            MarginalFamily fam;
            fam.support_min = 1;
            fam.support_max = 12;
            int bad = 0;
            for (int rep = 0; rep < 1000; ++rep) {
                ExactDist d = random_exact_dist(rng, fam);
                auto trace = run_sequence(d, CouplingMode::Antimonotonic, 40);
                Rat r0 = trace.steps[0].range_width;
                for (size_t n = 1; n < trace.steps.size(); ++n)
                    if (trace.steps[n].range_width * Rat(2) > trace.steps[n - 1].range_width) ++bad;
                Rat bound = r0 / rat_pow(Rat(2), 40);
                if (trace.steps[40].sup_distance_to_mean > bound) ++bad;
            }
            return check(bad == 0, detail, std::to_string(bad) + " halving failures");
        });
    if (t5 >= 30.0) {
        std::printf("FAIL criterion  5 runtime bound: %.2fs >= 30s\n", t5);
        ++g_failures;
    }

    run_criterion(6, "martingale feasibility matches the concave order on 200 matched-mean pairs",
        [&](std::string& detail) {
            RandomSource rng(606);
            MarginalFamily fam;
            fam.support_max = 5;
            int disagree = 0, inexact_rows = 0;
            for (int rep = 0; rep < 200; ++rep) {
                ExactDist dx = random_exact_dist(rng, fam);
                ExactDist dy = random_exact_dist(rng, fam);
                dy = dy.affine(Rat(1), dx.mean() - dy.mean());
                auto m = martingale_coupling(dx, dy);
                if (m.feasible() != concave_order_geq(dx, dy).geq) ++disagree;
                if (m.feasible()) {
                    const auto& j = *m.joint;
                    for (size_t i = 0; i < j.x_values().size(); ++i) {
                        Rat mass(0), moment(0);
                        for (size_t k = 0; k < j.y_values().size(); ++k) {
                            mass += j.probs()[i][k];
                            moment += j.probs()[i][k] * j.y_values()[k];
                        }
                        if (mass > 0 && moment != j.x_values()[i] * mass) ++inexact_rows;
                    }
                }
            }
            bool ok = check(disagree == 0, detail, std::to_string(disagree) + " disagreements");
            ok &= check(inexact_rows == 0, detail, std::to_string(inexact_rows) + " inexact rows");
            return ok;
        });

    run_criterion(7, "dyadic-average law of large numbers at desk scale",
        [&](std::string& detail) {
            // exact geometric L2 decay for the fair coin
            ExactDist coin01 = dist({{Rat(0), Rat(1, 2)}, {Rat(1), Rat(1, 2)}});
            auto base = run_sequence(coin01, CouplingMode::Independent, 6, Rat(2));
            bool ok = true;
            for (size_t n = 0; n <= 6; ++n) {
                Rat expect = Rat(1, 4) / rat_pow(Rat(2), static_cast<long long>(n));
                ok &= check(base.steps[n].dist.variance() == expect, detail,
                            "L2^2 distance differs from Var/2^n at step " + std::to_string(n));
            }
            // antimonotonic iterates dominate the i.i.d. baseline
            RandomSource rng(707);
            MarginalFamily fam;
            fam.support_max = 4;
            fam.value_dens = {1};
            fam.value_num_range = 8;
            int bad = 0;
            for (int rep = 0; rep < 100; ++rep) {
                ExactDist d = random_exact_dist(rng, fam);
                auto am = run_sequence(d, CouplingMode::Antimonotonic, 6);
                auto dy = dyadic_baseline(d, 6);
                for (size_t n = 0; n <= 6; ++n)
                    if (!concave_order_geq(am.steps[n].dist, dy.steps[n].dist).geq) ++bad;
            }
            ok &= check(bad == 0, detail, std::to_string(bad) + " dominance failures");
            return ok;
        });

    run_criterion(8, "NQD sum-law concave order on 200 seeded quadruples",
        [&](std::string& detail) {
            RandomSource rng(808);
            MarginalFamily fam;
            fam.support_max = 4;
            int bad = 0;
            for (int rep = 0; rep < 200; ++rep) {
                ExactDist x1 = random_exact_dist(rng, fam);
                ExactDist x2 = random_exact_dist(rng, fam);
                auto spread = [&](const ExactDist& d) {
                    size_t i = static_cast<size_t>(rng.uniform(0, static_cast<long long>(d.size()) - 1));
                    return mean_preserving_spread(d, i, Rat(rng.uniform(1, 6), 4),
                                                  Rat(rng.uniform(1, 3), 4));
                };
                ExactDist y1 = spread(x1), y2 = spread(x2);
                ExactJoint jx = rng.coin() ? antimonotonic_pair(x1, x2) : independent_pair(x1, x2);
                if (!is_nqd(jx)) ++bad;
                if (!concave_order_geq(sum_law(jx), sum_law(independent_pair(y1, y2))).geq) ++bad;
            }
            return check(bad == 0, detail, std::to_string(bad) + " failures");
        });

    double t9 = run_criterion(9, "implication matrix matches all expected profiles (seed 0, budget 500)",
        [&](std::string& detail) {
            AuditConfig cfg;
            cfg.seed = 0;
            cfg.pair_budget = 500;
            MatrixReport m = implication_matrix(cfg);
            for (const auto& row : m.rows)
                for (const auto& cell : row.cells)
                    if (cell.violated && cell.report) g_reports.push_back(*cell.report);
            bool ok = check(m.mismatches.empty(), detail,
                            m.mismatches.empty() ? "" : m.mismatches.front());
            ok &= check(m.consistency_failures.empty(), detail,
                        m.consistency_failures.empty() ? "" : m.consistency_failures.front());
            ok &= check(m.rows.size() == 8, detail, "matrix does not cover 8 preferences");
            return ok;
        });
    if (t9 >= 120.0) {
        std::printf("FAIL criterion  9 runtime bound: %.2fs >= 120s\n", t9);
        ++g_failures;
    }

    run_criterion(10, "property suites: order oracle, DSL round trip, marginals, certificates",
        [&](std::string& detail) {
            bool ok = true;
            // single-kink concave oracle vs the stop-loss test, 500 matched-mean pairs
            {
                RandomSource rng(1010);
                MarginalFamily fam;
                int bad = 0;
                for (int rep = 0; rep < 500; ++rep) {
                    ExactDist x = random_exact_dist(rng, fam);
                    ExactDist y = random_exact_dist(rng, fam).affine(Rat(1), Rat(0));
                    y = y.affine(Rat(1), x.mean() - y.mean());
                    auto eu_kink = [](const ExactDist& d, const Rat& k) {
                        Rat s(0);
                        for (size_t i = 0; i < d.size(); ++i)
                            s += std::min(d.value(i) - k, Rat(0)) * d.prob(i);
                        return s;
                    };
                    bool oracle = x.mean() == y.mean();
                    if (oracle) {
                        std::vector<Rat> kinks = x.values();
                        kinks.insert(kinks.end(), y.values().begin(), y.values().end());
                        for (const Rat& k : kinks)
                            if (eu_kink(x, k) < eu_kink(y, k)) oracle = false;
                    }
                    if (oracle != concave_order_geq(x, y).geq) ++bad;
                }
                ok &= check(bad == 0, detail, "order oracle disagreements: " + std::to_string(bad));
            }
            // DSL round trip: catalog and 200 seeded expressions built from it
            {
                int bad = 0;
                for (const auto& e : catalog()) {
                    Preference p = parse_preference(print_preference(e.preference));
                    if (p.criteria().size() != e.preference.criteria().size()) ++bad;
                    for (size_t i = 0; i < p.criteria().size(); ++i)
                        if (!(*p.criteria()[i].spec == *e.preference.criteria()[i].spec)) ++bad;
                }
                RandomSource rng(2020);
                for (int rep = 0; rep < 200; ++rep) {
                    FunctionalPtr f = testutil::random_ast(rng, 4);
                    if (!(*parse_functional(print_functional(f)) == *f)) ++bad;
                }
                ok &= check(bad == 0, detail, "DSL round-trip failures: " + std::to_string(bad));
            }
            // marginal exactness across all constructors, 500 pairs
            {
                RandomSource rng(3030);
                MarginalFamily fam;
                int bad = 0;
                for (int rep = 0; rep < 500; ++rep) {
                    ExactDist dx = random_exact_dist(rng, fam);
                    ExactDist dy = random_exact_dist(rng, fam);
                    for (const auto& j : {comonotonic_pair(dx, dy), antimonotonic_pair(dx, dy),
                                          independent_pair(dx, dy)}) {
                        if (!(j.x_marginal() == dx)) ++bad;
                        if (!(j.y_marginal() == dy)) ++bad;
                    }
                    ExactDist dm = dy.affine(Rat(1), dx.mean() - dy.mean());
                    auto m = martingale_coupling(dx, dm);
                    if (m.feasible()) {
                        if (!(m.joint->x_marginal() == dx)) ++bad;
                        if (!(m.joint->y_marginal() == dm)) ++bad;
                    }
                }
                ok &= check(bad == 0, detail, "marginal exactness failures: " + std::to_string(bad));
            }
            // every violated certificate collected above re-verifies standalone
            {
                int bad = 0;
                for (const auto& rep : g_reports) {
                    Preference pref = parse_preference(rep.preference_dsl);
                    if (!verify_certificate(pref, rep)) ++bad;
                }
                ok &= check(bad == 0, detail,
                            "certificate re-verification failures: " + std::to_string(bad) + " of " +
                                std::to_string(g_reports.size()));
                ok &= check(!g_reports.empty(), detail, "no certificates were collected");
            }
            return ok;
        });

    std::printf("%s: %d of 10 criteria failed\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", g_failures);
    return g_failures == 0 ? 0 : 1;
}
