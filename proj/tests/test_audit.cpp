#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "divrisk/audit.hpp"
#include "divrisk/json_io.hpp"

#include <cmath>

using namespace divrisk;

namespace {

AuditConfig quick_cfg(size_t budget = 60) {
    AuditConfig cfg;
    cfg.pair_budget = budget;
    return cfg;
}

AuditReport<Rat> run_div(const std::string& name, PairClass cls, size_t budget = 60) {
    const auto& e = catalog_entry(name);
    return check_diversification<Rat>(e.preference, e.dsl, cls, quick_cfg(budget));
}

AuditReport<Rat> run_anti(const std::string& name, PairClass cls, size_t budget = 60) {
    const auto& e = catalog_entry(name);
    return check_anti_diversification<Rat>(e.preference, e.dsl, cls, quick_cfg(budget));
}

}  // namespace

TEST_CASE("config validation") {
    AuditConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.pair_budget = 0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = AuditConfig();
    cfg.lambda_grid = {Rat(0), Rat(1)};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg.lambda_grid = {Rat(0), Rat(1, 2), Rat(1), Rat(2)};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("pair generators honor their class contracts") {
    AuditConfig cfg = quick_cfg();
    for (PairClass cls : all_pair_classes) {
        PairGenerator<Rat> gen(cls, cfg);
        for (int n = 0; n < 40; ++n) {
            auto j = gen.next();
            if (!j) continue;
            switch (cls) {
                case PairClass::AmAndId:
                    CHECK(j->has_tag(Tag::Antimonotonic));
                    CHECK(j->has_tag(Tag::IdMarginals));
                    break;
                case PairClass::InAndId:
                    CHECK(j->has_tag(Tag::Independent));
                    CHECK(j->has_tag(Tag::IdMarginals));
                    break;
                case PairClass::Comonotonic: CHECK(j->has_tag(Tag::Comonotonic)); break;
                case PairClass::Antimonotonic: CHECK(j->has_tag(Tag::Antimonotonic)); break;
                case PairClass::Independent: CHECK(j->has_tag(Tag::Independent)); break;
                case PairClass::Id: CHECK(j->has_tag(Tag::IdMarginals)); break;
                case PairClass::Exchangeable: CHECK(j->has_tag(Tag::Exchangeable)); break;
                case PairClass::All: break;
            }
        }
    }
}

TEST_CASE("golden counterexample: weird variance on AM and ID pairs") {
    auto rep = run_div("WeirdVar", PairClass::AmAndId);
    REQUIRE(rep.violated);
    REQUIRE(rep.certificate);
    const auto& c = *rep.certificate;
    CHECK(c.x == make_dist<Rat>({{Rat(0), Rat(2, 3)}, {Rat(3), Rat(1, 3)}}));
    CHECK(*c.lambda == Rat(1, 2));
    CHECK(c.right_values == std::vector<std::string>{"1"});
    CHECK(c.left_values == std::vector<std::string>{"1/4"});
    CHECK(verify_certificate(catalog_entry("WeirdVar").preference, rep));
}

TEST_CASE("golden counterexample: weird variance on IN and ID pairs") {
    auto rep = run_div("WeirdVar", PairClass::InAndId);
    REQUIRE(rep.violated);
    CHECK(rep.certificate->left_values == std::vector<std::string>{"0"});
    CHECK(rep.certificate->right_values == std::vector<std::string>{"1"});
}

TEST_CASE("golden counterexample: quarter-power mean-variance on antimonotonic pairs") {
    auto rep = run_div("MeanVarQuarter", PairClass::Antimonotonic);
    REQUIRE(rep.violated);
    const auto& c = *rep.certificate;
    CHECK(c.x == ExactDist::point_mass(Rat(1)));
    CHECK(c.y == make_dist<Rat>({{Rat(1), Rat(1, 2)}, {Rat(3), Rat(1, 2)}}));
    CHECK(*c.lambda == Rat(1, 2));
    CHECK(c.right_values == std::vector<std::string>{"1"});
    double mixval = std::stod(c.left_values[0]);
    CHECK(mixval == doctest::Approx(1.5 - std::sqrt(0.5)).epsilon(1e-12));
    CHECK(verify_certificate(catalog_entry("MeanVarQuarter").preference, rep));
}

TEST_CASE("dual utility with increasing weight diversifies on comonotonic pairs only") {
    CHECK_FALSE(run_div("DualIncreasing", PairClass::Comonotonic).violated);
    auto am = run_div("DualIncreasing", PairClass::AmAndId);
    REQUIRE(am.violated);
    CHECK(am.certificate->right_values == std::vector<std::string>{"5/3"});
    CHECK(am.certificate->left_values == std::vector<std::string>{"4/3"});
    // anti-diversification everywhere: mixing never helps a risk seeker
    for (PairClass cls : all_pair_classes) CHECK_FALSE(run_anti("DualIncreasing", cls).violated);
}

TEST_CASE("essential supremum diversifies on independent pairs") {
    CHECK_FALSE(run_div("EssSup", PairClass::Independent).violated);
    CHECK_FALSE(run_div("EssSup", PairClass::InAndId).violated);
    CHECK_FALSE(run_anti("EssSup", PairClass::Independent).violated);
    CHECK(run_div("EssSup", PairClass::AmAndId).violated);
}

TEST_CASE("weak risk attitude checks") {
    AuditConfig cfg = quick_cfg();
    auto wv = check_weak_risk_attitude<Rat>(catalog_entry("WeirdVar").preference,
                                            catalog_entry("WeirdVar").dsl, false, cfg);
    CHECK_FALSE(wv.violated);
    auto es = check_weak_risk_attitude<Rat>(catalog_entry("EssSup").preference,
                                            catalog_entry("EssSup").dsl, false, cfg);
    REQUIRE(es.violated);
    CHECK(verify_certificate(catalog_entry("EssSup").preference, es));
    auto mv = check_weak_risk_attitude<Rat>(catalog_entry("MeanVariancePareto").preference,
                                            catalog_entry("MeanVariancePareto").dsl, false, cfg);
    CHECK_FALSE(mv.violated);
}

TEST_CASE("strong risk attitude checks") {
    AuditConfig cfg = quick_cfg();
    auto er = check_strong_risk_attitude<Rat>(catalog_entry("ExpRatio").preference,
                                              catalog_entry("ExpRatio").dsl, false, cfg);
    REQUIRE(er.violated);  // the coin against its lower spread
    CHECK(er.certificate->x == make_dist<Rat>({{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}}));
    CHECK(verify_certificate(catalog_entry("ExpRatio").preference, er));

    auto mv = check_strong_risk_attitude<Rat>(catalog_entry("MeanVariancePareto").preference,
                                              catalog_entry("MeanVariancePareto").dsl, false, cfg);
    CHECK_FALSE(mv.violated);
    auto dual = check_strong_risk_attitude<Rat>(catalog_entry("DualIncreasing").preference,
                                                catalog_entry("DualIncreasing").dsl, true, cfg);
    CHECK_FALSE(dual.violated);  // strong risk seeking holds
}

TEST_CASE("exp-ratio fails diversification on exchangeable pairs") {
    // the conditional antimonotonic construction reaches the violation
    auto rep = run_div("ExpRatio", PairClass::Exchangeable, 120);
    REQUIRE(rep.violated);
    CHECK(rep.certificate->joint->has_tag(Tag::Exchangeable));
    CHECK(verify_certificate(catalog_entry("ExpRatio").preference, rep));
    // and on the ID class, which contains the same coupling
    CHECK(run_div("ExpRatio", PairClass::Id, 120).violated);
}

TEST_CASE("mean-squared preference fails diversification only off the ID classes") {
    CHECK(run_div("MeanSquared", PairClass::Antimonotonic).violated);
    CHECK(run_div("MeanSquared", PairClass::Comonotonic).violated);
    CHECK(run_div("MeanSquared", PairClass::Independent).violated);
    CHECK_FALSE(run_div("MeanSquared", PairClass::Id).violated);
    CHECK_FALSE(run_div("MeanSquared", PairClass::Exchangeable).violated);
    for (PairClass cls : all_pair_classes) CHECK_FALSE(run_anti("MeanSquared", cls).violated);
}

TEST_CASE("mean-variance Pareto diversifies everywhere and anti-diversifies nowhere") {
    for (PairClass cls : all_pair_classes) {
        CHECK_FALSE(run_div("MeanVariancePareto", cls).violated);
        CHECK(run_anti("MeanVariancePareto", cls).violated);
    }
}

TEST_CASE("anti-diversification equals diversification of the reversed preference") {
    auto reverse = [](const Preference& p) {
        std::vector<Preference::Criterion> cs;
        for (auto c : p.criteria()) {
            c.direction = c.direction == Direction::HigherBetter ? Direction::LowerBetter
                                                                 : Direction::HigherBetter;
            cs.push_back(c);
        }
        return p.is_total() ? Preference::total(cs[0].spec, cs[0].direction)
                            : Preference::pareto(cs);
    };
    for (const std::string name : {"WeirdVar", "EssSup", "MeanVarQuarter", "MeanOnly"}) {
        const auto& e = catalog_entry(name);
        Preference rev = reverse(e.preference);
        for (PairClass cls : {PairClass::AmAndId, PairClass::Comonotonic, PairClass::Independent}) {
            auto anti = check_anti_diversification<Rat>(e.preference, e.dsl, cls, quick_cfg());
            auto divr = check_diversification<Rat>(rev, e.dsl, cls, quick_cfg());
            CHECK(anti.violated == divr.violated);
            if (anti.violated) {
                CHECK(anti.certificate->x == divr.certificate->x);
                CHECK(anti.certificate->y == divr.certificate->y);
                CHECK(*anti.certificate->lambda == *divr.certificate->lambda);
            }
        }
    }
}

TEST_CASE("reports are deterministic and serialize with a versioned schema") {
    auto a = run_div("WeirdVar", PairClass::AmAndId);
    auto b = run_div("WeirdVar", PairClass::AmAndId);
    CHECK(report_to_json(a) == report_to_json(b));
    CHECK(report_to_json(a).find("divrisk-audit/1") != std::string::npos);
    auto c = run_div("EssSup", PairClass::Independent, 30);
    auto d = run_div("EssSup", PairClass::Independent, 30);
    CHECK(report_to_json(c) == report_to_json(d));
}

TEST_CASE("certificates re-verify and tampering is detected") {
    auto rep = run_div("WeirdVar", PairClass::AmAndId);
    REQUIRE(rep.violated);
    CHECK(verify_certificate(catalog_entry("WeirdVar").preference, rep));
    auto tampered = rep;
    tampered.certificate->left_values = {"2/4"};
    CHECK_FALSE(verify_certificate(catalog_entry("WeirdVar").preference, tampered));
    auto wrong_lambda = rep;
    wrong_lambda.certificate->lambda = Rat(1, 4);
    CHECK_FALSE(verify_certificate(catalog_entry("WeirdVar").preference, wrong_lambda));
}

TEST_CASE("implication matrix at a small budget matches every expected profile") {
    AuditConfig cfg;
    cfg.pair_budget = 80;
    MatrixReport m = implication_matrix(cfg);
    for (const auto& s : m.mismatches) MESSAGE(s);
    for (const auto& s : m.consistency_failures) MESSAGE(s);
    CHECK(m.ok());
    CHECK(m.rows.size() == catalog().size());
    for (const auto& row : m.rows) CHECK(row.cells.size() == 20);
    // rendering works
    CHECK(matrix_to_table(m).find("MeanOnly") != std::string::npos);
    CHECK(matrix_to_json(m).find("divrisk-matrix/1") != std::string::npos);
}
