#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "divrisk/distribution.hpp"
#include "divrisk/rng.hpp"

#include <cmath>

using namespace divrisk;

namespace {

ExactDist dist(std::vector<std::pair<Rat, Rat>> atoms) {
    return make_dist<Rat>(std::move(atoms));
}

const ExactDist kGolden = dist({{Rat(0), Rat(2, 3)}, {Rat(3), Rat(1, 3)}});

}  // namespace

TEST_CASE("construction canonicalizes and validates") {
    auto d = dist({{Rat(3), Rat(1, 3)}, {Rat(0), Rat(1, 3)}, {Rat(0), Rat(1, 3)}});
    CHECK(d.size() == 2);
    CHECK(d.value(0) == Rat(0));
    CHECK(d.prob(0) == Rat(2, 3));
    CHECK(d == kGolden);

    CHECK_THROWS_AS(dist({}), std::domain_error);
    CHECK_THROWS_AS(dist({{Rat(0), Rat(-1, 2)}, {Rat(1), Rat(3, 2)}}), std::domain_error);
    CHECK_THROWS_AS(dist({{Rat(0), Rat(0)}}), std::domain_error);

    // total mass is normalized
    auto e = dist({{Rat(0), Rat(2)}, {Rat(3), Rat(1)}});
    CHECK(e == kGolden);
}

TEST_CASE("construction is idempotent") {
    RandomSource rng(11);
    MarginalFamily fam;
    for (int i = 0; i < 50; ++i) {
        ExactDist d = random_exact_dist(rng, fam);
        std::vector<ExactDist::Atom> atoms;
        for (size_t k = 0; k < d.size(); ++k) atoms.push_back({d.value(k), d.prob(k)});
        CHECK(ExactDist::from_atoms(atoms) == d);
    }
}

TEST_CASE("left quantile") {
    CHECK(kGolden.quantile(Rat(2, 3)) == Rat(0));   // boundary hits the lower atom
    CHECK(kGolden.quantile(Rat(7, 10)) == Rat(3));  // just past the jump
    auto d13 = dist({{Rat(1), Rat(1, 2)}, {Rat(3), Rat(1, 2)}});
    CHECK(d13.quantile(Rat(1, 2)) == Rat(1));

    CHECK_THROWS_AS(kGolden.quantile(Rat(0)), std::domain_error);
    CHECK_THROWS_AS(kGolden.quantile(Rat(1)), std::domain_error);
    CHECK_THROWS_AS(kGolden.quantile(Rat(3, 2)), std::domain_error);
}

TEST_CASE("moments and support") {
    CHECK(kGolden.mean() == Rat(1));
    CHECK(kGolden.variance() == Rat(2));
    auto pm = ExactDist::point_mass(Rat(5, 7));
    CHECK(pm.mean() == Rat(5, 7));
    CHECK(pm.variance() == Rat(0));
    CHECK(pm.range_width() == Rat(0));
    auto z = dist({{Rat(0), Rat(1, 3)}, {Rat(3, 2), Rat(2, 3)}});
    CHECK(z.mean() == Rat(1));
    CHECK(z.variance() == Rat(1, 2));
    CHECK(kGolden.support_bounds() == std::pair<Rat, Rat>{Rat(0), Rat(3)});
    CHECK(kGolden.range_width() == Rat(3));
}

TEST_CASE("stop-loss transform") {
    // oracle: direct sum over atoms
    auto oracle = [](const ExactDist& d, const Rat& k) {
        Rat s(0);
        for (size_t i = 0; i < d.size(); ++i)
            if (d.value(i) > k) s += (d.value(i) - k) * d.prob(i);
        return s;
    };
    auto coin = dist({{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}});
    CHECK(oracle(coin, Rat(-1)) == Rat(1));
    CHECK(coin.stop_loss(Rat(-1)) == Rat(1));

    auto y = dist({{Rat(-3, 2), Rat(1, 4)}, {Rat(-1, 2), Rat(1, 4)}, {Rat(1), Rat(1, 2)}});
    CHECK(oracle(y, Rat(-1)) == Rat(9, 8));
    CHECK(y.stop_loss(Rat(-1)) == Rat(9, 8));

    CHECK(kGolden.stop_loss(kGolden.max_value()) == Rat(0));
    // below the support it equals mean - k
    CHECK(kGolden.stop_loss(Rat(-2)) == kGolden.mean() + Rat(2));
}

TEST_CASE("stop-loss is 1-Lipschitz convex piecewise linear") {
    RandomSource rng(7);
    MarginalFamily fam;
    for (int rep = 0; rep < 100; ++rep) {
        ExactDist d = random_exact_dist(rng, fam);
        // slopes between consecutive kinks lie in [-1, 0] and increase
        std::vector<Rat> ks = d.values();
        ks.insert(ks.begin(), d.min_value() - 1);
        ks.push_back(d.max_value() + 1);
        Rat prev_slope(-2);
        for (size_t i = 1; i < ks.size(); ++i) {
            Rat slope = (d.stop_loss(ks[i]) - d.stop_loss(ks[i - 1])) / (ks[i] - ks[i - 1]);
            CHECK(slope >= Rat(-1));
            CHECK(slope <= Rat(0));
            CHECK(slope >= prev_slope);
            prev_slope = slope;
        }
    }
}

TEST_CASE("exp moment") {
    CHECK(ExactDist::point_mass(Rat(0)).exp_moment(Rat(2)).approx() == doctest::Approx(1.0));
    auto coin = dist({{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}});
    CHECK(coin.exp_moment(Rat(1)).approx() == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(coin.exp_moment(Rat(2)).approx() == doctest::Approx(std::cosh(2.0)).epsilon(1e-14));
    auto big = dist({{Rat(500), Rat(1, 2)}, {Rat(0), Rat(1, 2)}});
    CHECK_THROWS_AS(big.exp_moment(Rat(1000)), std::domain_error);
}

TEST_CASE("quantile/cdf Galois property") {
    RandomSource rng(3);
    MarginalFamily fam;
    for (int rep = 0; rep < 100; ++rep) {
        ExactDist d = random_exact_dist(rng, fam);
        for (int num = 1; num < 16; ++num) {
            Rat t(num, 16);
            for (size_t i = 0; i < d.size(); ++i) {
                bool lhs = d.quantile(t) <= d.value(i);
                bool rhs = d.cdf(d.value(i)) >= t;
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("mean equals the integral of the quantile function") {
    RandomSource rng(5);
    MarginalFamily fam;
    for (int rep = 0; rep < 100; ++rep) {
        ExactDist d = random_exact_dist(rng, fam);
        Rat integral(0), prev(0);
        auto cum = d.cumulative();
        for (size_t i = 0; i < d.size(); ++i) {
            integral += d.value(i) * (cum[i] - prev);
            prev = cum[i];
        }
        CHECK(integral == d.mean());
        CHECK(d.min_value() <= d.mean());
        CHECK(d.mean() <= d.max_value());
    }
}

TEST_CASE("affine transform") {
    auto d = kGolden.affine(Rat(-2), Rat(1));
    CHECK(d.mean() == Rat(-2) * kGolden.mean() + Rat(1));
    CHECK(d.min_value() == Rat(-5));
    CHECK(d.max_value() == Rat(1));
}
