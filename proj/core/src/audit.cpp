#include "divrisk/audit.hpp"

#include <sstream>

namespace divrisk {

namespace {

std::string dist_brief(const ExactDist& d) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) os << ", ";
        os << rational_to_string(d.value(i)) << ": " << rational_to_string(d.prob(i));
    }
    os << "}";
    return os.str();
}

std::string cert_brief(const AuditCertificate<Rat>& c) {
    std::ostringstream os;
    os << "X=" << dist_brief(c.x) << " Y=" << dist_brief(c.y);
    if (c.lambda) os << " lambda=" << rational_to_string(*c.lambda);
    os << " left=[";
    for (size_t i = 0; i < c.left_values.size(); ++i) os << (i ? "," : "") << c.left_values[i];
    os << "] right=[";
    for (size_t i = 0; i < c.right_values.size(); ++i) os << (i ? "," : "") << c.right_values[i];
    os << "] -> " << comparison_name(c.comparison);
    return os.str();
}

struct RowVerdicts {
    std::array<bool, 8> div_violated{};
    std::array<bool, 8> anti_violated{};
    bool weak_ra_violated = false, strong_ra_violated = false;
    bool weak_rs_violated = false, strong_rs_violated = false;
};

}  // namespace

MatrixReport implication_matrix(const AuditConfig& cfg) {
    cfg.validate();
    MatrixReport report;
    report.config = cfg;

    for (const CatalogEntry& entry : catalog()) {
        MatrixRow row;
        row.preference = entry.name;
        RowVerdicts v;

        auto record = [&](AuditProperty prop, std::optional<PairClass> cls,
                          AuditReport<Rat> rep, bool expected_violated) {
            std::string cert = rep.certificate ? cert_brief(*rep.certificate) : "";
            bool violated = rep.violated;
            MatrixCell cell{prop, cls, violated, expected_violated, cert,
                            std::make_shared<const AuditReport<Rat>>(std::move(rep))};
            if (!cell.match()) {
                std::ostringstream os;
                os << entry.name << " / " << audit_property_name(prop);
                if (cls) os << " on " << pair_class_name(*cls);
                os << ": expected " << (expected_violated ? "violated" : "no violation") << ", got "
                   << (violated ? "violated" : "no violation");
                if (violated && !cert.empty()) os << " [" << cert << "]";
                if (!violated) os << " [no certificate found within budget " << cfg.pair_budget << "]";
                report.mismatches.push_back(os.str());
            }
            row.cells.push_back(std::move(cell));
        };

        for (size_t ci = 0; ci < all_pair_classes.size(); ++ci) {
            PairClass cls = all_pair_classes[ci];
            auto rep = check_diversification<Rat>(entry.preference, entry.dsl, cls, cfg);
            v.div_violated[ci] = rep.violated;
            record(AuditProperty::Diversification, cls, std::move(rep),
                   !entry.expected.diversification[ci]);
        }
        for (size_t ci = 0; ci < all_pair_classes.size(); ++ci) {
            PairClass cls = all_pair_classes[ci];
            auto rep = check_anti_diversification<Rat>(entry.preference, entry.dsl, cls, cfg);
            v.anti_violated[ci] = rep.violated;
            record(AuditProperty::AntiDiversification, cls, std::move(rep),
                   !entry.expected.anti_diversification[ci]);
        }
        {
            auto rep = check_weak_risk_attitude<Rat>(entry.preference, entry.dsl, false, cfg);
            v.weak_ra_violated = rep.violated;
            record(AuditProperty::WeakRiskAversion, std::nullopt, std::move(rep),
                   !entry.expected.weak_risk_aversion);
        }
        {
            auto rep = check_strong_risk_attitude<Rat>(entry.preference, entry.dsl, false, cfg);
            v.strong_ra_violated = rep.violated;
            record(AuditProperty::StrongRiskAversion, std::nullopt, std::move(rep),
                   !entry.expected.strong_risk_aversion);
        }
        {
            auto rep = check_weak_risk_attitude<Rat>(entry.preference, entry.dsl, true, cfg);
            v.weak_rs_violated = rep.violated;
            record(AuditProperty::WeakRiskSeeking, std::nullopt, std::move(rep),
                   !entry.expected.weak_risk_seeking);
        }
        {
            auto rep = check_strong_risk_attitude<Rat>(entry.preference, entry.dsl, true, cfg);
            v.strong_rs_violated = rep.violated;
            record(AuditProperty::StrongRiskSeeking, std::nullopt, std::move(rep),
                   !entry.expected.strong_risk_seeking);
        }

        // structural cross-checks between columns
        auto idx = [](PairClass c) { return static_cast<size_t>(c); };
        auto fail = [&](const std::string& msg) {
            report.consistency_failures.push_back(entry.name + ": " + msg);
        };
        // diversification on AM & ID implies weak risk aversion
        if (!v.div_violated[idx(PairClass::AmAndId)] && v.weak_ra_violated)
            fail("diversification holds on AM_and_ID yet weak risk aversion is violated");
        // strong risk aversion implies diversification on ID and exchangeable pairs
        if (!v.strong_ra_violated &&
            (v.div_violated[idx(PairClass::Id)] || v.div_violated[idx(PairClass::Exchangeable)]))
            fail("strong risk aversion passes but diversification fails on an ID class");
        // strong implies weak
        if (v.weak_ra_violated && !v.strong_ra_violated)
            fail("weak risk aversion violated but strong risk aversion not violated");
        if (v.weak_rs_violated && !v.strong_rs_violated)
            fail("weak risk seeking violated but strong risk seeking not violated");
        // neutrality equivalences for continuous preferences
        bool neutral = !v.weak_ra_violated && !v.weak_rs_violated;
        auto class_neutral = [&](PairClass c) {
            return !v.div_violated[idx(c)] && !v.anti_violated[idx(c)];
        };
        for (PairClass c : {PairClass::Id, PairClass::Exchangeable, PairClass::AmAndId}) {
            if (neutral != class_neutral(c))
                fail(std::string("risk neutrality and diversification neutrality on ") +
                     pair_class_name(c) + " disagree");
        }
        if (entry.monotone_on_constants && neutral) {
            for (PairClass c : {PairClass::All, PairClass::Antimonotonic})
                if (!class_neutral(c))
                    fail(std::string("monotone risk-neutral preference not neutral on ") +
                         pair_class_name(c));
        }
        if (entry.monotone_on_constants && entry.compact_continuous) {
            for (PairClass c : {PairClass::Independent, PairClass::InAndId})
                if (neutral != class_neutral(c))
                    fail(std::string("neutrality equivalence fails on ") + pair_class_name(c));
        }
        // under compact continuity, diversification on IN & ID implies weak risk aversion
        if (entry.compact_continuous) {
            if (!v.div_violated[idx(PairClass::InAndId)] && v.weak_ra_violated)
                fail("diversification holds on IN_and_ID yet weak risk aversion is violated");
        } else {
            row.notes.push_back(
                "IN_and_ID implication consistency-checked only: preference is not compact "
                "upper semicontinuous");
        }

        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace divrisk
