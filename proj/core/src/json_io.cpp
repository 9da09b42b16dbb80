#include "divrisk/json_io.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace divrisk {

namespace {

using Json = nlohmann::ordered_json;

template <class S>
Json scalar_to_json(const S& v) {
    if constexpr (scalar_traits<S>::exact)
        return rational_to_string(v);
    else
        return v;
}

template <class S>
S scalar_from_json(const Json& j) {
    if constexpr (scalar_traits<S>::exact) {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rat(j.get<long long>());
        if (j.is_number()) {
            double d = j.get<double>();
            if (d == static_cast<long long>(d)) return Rat(static_cast<long long>(d));
            throw std::domain_error(
                "exact mode requires rational strings like \"2/3\" for non-integer numbers");
        }
        throw std::domain_error("expected a number or rational string");
    } else {
        if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
        if (j.is_number()) return j.get<double>();
        throw std::domain_error("expected a number or rational string");
    }
}

template <class S>
Json dist_to_json_obj(const Distribution<S>& d) {
    Json atoms = Json::array();
    for (size_t i = 0; i < d.size(); ++i)
        atoms.push_back(Json{{"v", scalar_to_json(d.value(i))}, {"p", scalar_to_json(d.prob(i))}});
    return Json{{"atoms", atoms}};
}

template <class S>
Distribution<S> dist_from_json_obj(const Json& j) {
    if (!j.contains("atoms") || !j["atoms"].is_array())
        throw std::domain_error("distribution JSON needs an \"atoms\" array");
    std::vector<typename Distribution<S>::Atom> atoms;
    for (const auto& a : j["atoms"])
        atoms.push_back({scalar_from_json<S>(a.at("v")), scalar_from_json<S>(a.at("p"))});
    return Distribution<S>::from_atoms(std::move(atoms));
}

template <class S>
Json joint_to_json_obj(const Joint<S>& jt) {
    Json x = Json::array(), y = Json::array(), p = Json::array(), tags = Json::array();
    for (const auto& v : jt.x_values()) x.push_back(scalar_to_json(v));
    for (const auto& v : jt.y_values()) y.push_back(scalar_to_json(v));
    for (const auto& row : jt.probs()) {
        Json r = Json::array();
        for (const auto& q : row) r.push_back(scalar_to_json(q));
        p.push_back(r);
    }
    for (Tag t : jt.tags()) tags.push_back(tag_name(t));
    return Json{{"x", x}, {"y", y}, {"p", p}, {"tags", tags}};
}

template <class S>
Joint<S> joint_from_json_obj(const Json& j) {
    std::vector<S> xs, ys;
    for (const auto& v : j.at("x")) xs.push_back(scalar_from_json<S>(v));
    for (const auto& v : j.at("y")) ys.push_back(scalar_from_json<S>(v));
    std::vector<std::vector<S>> p;
    for (const auto& row : j.at("p")) {
        std::vector<S> r;
        for (const auto& q : row) r.push_back(scalar_from_json<S>(q));
        p.push_back(std::move(r));
    }
    Joint<S> out = Joint<S>::from_matrix(std::move(xs), std::move(ys), std::move(p));
    if (j.contains("tags")) {
        for (const auto& t : j["tags"]) {
            auto tag = tag_from_name(t.get<std::string>());
            if (!tag) throw std::domain_error("unknown tag '" + t.get<std::string>() + "'");
            if (!out.has_tag(*tag))
                throw std::domain_error("joint claims tag '" + t.get<std::string>() +
                                        "' that fails verification");
        }
    }
    return out;
}

Json config_to_json(const AuditConfig& cfg) {
    Json grid = Json::array();
    for (const Rat& l : cfg.lambda_grid) grid.push_back(rational_to_string(l));
    return Json{{"seed", cfg.seed},
                {"budget", cfg.pair_budget},
                {"lambda_grid", grid},
                {"mode", cfg.mode.is_exact() ? "exact" : "float"},
                {"marginal_family",
                 Json{{"support_min", cfg.marginal_family.support_min},
                      {"support_max", cfg.marginal_family.support_max},
                      {"value_num_range", cfg.marginal_family.value_num_range},
                      {"weight_max", cfg.marginal_family.weight_max}}}};
}

template <class S>
Json report_to_json_obj(const AuditReport<S>& rep) {
    Json out{{"schema", "divrisk-audit/1"},
             {"property", audit_property_name(rep.property)},
             {"class", rep.pair_class ? Json(pair_class_name(*rep.pair_class)) : Json(nullptr)},
             {"preference", rep.preference_dsl},
             {"verdict", rep.violated ? "violated" : "no_violation_within_budget"},
             {"pairs_tested", rep.pairs_tested},
             {"pairs_skipped", rep.pairs_skipped},
             {"config", config_to_json(rep.config)}};
    if (rep.certificate) {
        const auto& c = *rep.certificate;
        Json cert{{"x", dist_to_json_obj(c.x)},
                  {"y", dist_to_json_obj(c.y)},
                  {"joint", c.joint ? joint_to_json_obj(*c.joint) : Json(nullptr)},
                  {"lambda", c.lambda ? Json(rational_to_string(*c.lambda)) : Json(nullptr)},
                  {"left_values", c.left_values},
                  {"right_values", c.right_values},
                  {"comparison", comparison_name(c.comparison)}};
        out["certificate"] = cert;
    } else {
        out["certificate"] = nullptr;
    }
    return out;
}

}  // namespace

template <class S>
std::string dist_to_json(const Distribution<S>& d) {
    return dist_to_json_obj(d).dump();
}

template <class S>
Distribution<S> dist_from_json(const std::string& text) {
    return dist_from_json_obj<S>(Json::parse(text));
}

template <class S>
std::string joint_to_json(const Joint<S>& j) {
    return joint_to_json_obj(j).dump();
}

template <class S>
Joint<S> joint_from_json(const std::string& text) {
    return joint_from_json_obj<S>(Json::parse(text));
}

template <class S>
std::string report_to_json(const AuditReport<S>& rep) {
    return report_to_json_obj(rep).dump(2);
}

template <class S>
std::string report_to_table(const AuditReport<S>& rep) {
    std::ostringstream os;
    os << "property    : " << audit_property_name(rep.property);
    if (rep.pair_class) os << " on " << pair_class_name(*rep.pair_class);
    os << "\npreference  : " << rep.preference_dsl
       << "\nverdict     : " << (rep.violated ? "violated" : "no violation within budget")
       << "\npairs tested: " << rep.pairs_tested << " (skipped " << rep.pairs_skipped << ")\n";
    if (rep.certificate) {
        const auto& c = *rep.certificate;
        os << "certificate :\n  X = " << dist_to_json(c.x) << "\n  Y = " << dist_to_json(c.y) << "\n";
        if (c.lambda) os << "  lambda = " << rational_to_string(*c.lambda) << "\n";
        os << "  left  = [";
        for (size_t i = 0; i < c.left_values.size(); ++i) os << (i ? ", " : "") << c.left_values[i];
        os << "]\n  right = [";
        for (size_t i = 0; i < c.right_values.size(); ++i) os << (i ? ", " : "") << c.right_values[i];
        os << "]\n  comparison = " << comparison_name(c.comparison) << "\n";
    }
    return os.str();
}

template <class S>
std::string trace_to_jsonl(const IterationTrace<S>& trace) {
    std::ostringstream os;
    for (size_t n = 0; n < trace.steps.size(); ++n) {
        const auto& st = trace.steps[n];
        Json rec{{"n", n},
                 {"atoms", st.dist.size()},
                 {"range", scalar_to_json(st.range_width)},
                 {"sup_dist", scalar_to_json(st.sup_distance_to_mean)},
                 {"lp_dist", st.lp_distance_to_mean.str()},
                 {"coarsened", st.coarsened}};
        os << rec.dump() << "\n";
    }
    return os.str();
}

std::string matrix_to_json(const MatrixReport& m) {
    Json rows = Json::array();
    for (const auto& row : m.rows) {
        Json cells = Json::array();
        for (const auto& c : row.cells) {
            cells.push_back(
                Json{{"property", audit_property_name(c.property)},
                     {"class", c.pair_class ? Json(pair_class_name(*c.pair_class)) : Json(nullptr)},
                     {"verdict", c.violated ? "violated" : "no_violation_within_budget"},
                     {"expected", c.expected_violated ? "violated" : "no_violation_within_budget"},
                     {"match", c.match()},
                     {"certificate", c.certificate_summary}});
        }
        rows.push_back(Json{{"preference", row.preference}, {"cells", cells}, {"notes", row.notes}});
    }
    return Json{{"schema", "divrisk-matrix/1"},
                {"config", config_to_json(m.config)},
                {"rows", rows},
                {"mismatches", m.mismatches},
                {"consistency_failures", m.consistency_failures},
                {"ok", m.ok()}}
        .dump(2);
}

std::string matrix_to_table(const MatrixReport& m) {
    std::ostringstream os;
    const std::vector<std::string> class_abbrev = {"All", "ID", "CM", "AM", "AM&ID", "IN", "IN&ID", "EX"};
    os << std::left << std::setw(20) << "preference";
    for (const auto& a : class_abbrev) os << std::setw(7) << ("d:" + a);
    for (const auto& a : class_abbrev) os << std::setw(7) << ("a:" + a);
    os << std::setw(5) << "wRA" << std::setw(5) << "sRA" << std::setw(5) << "wRS" << std::setw(5)
       << "sRS" << "\n";
    for (const auto& row : m.rows) {
        os << std::left << std::setw(20) << row.preference;
        for (const auto& c : row.cells) {
            std::string mark = c.violated ? "viol" : "ok";
            if (!c.match()) mark = "!" + mark;
            int width = c.pair_class ? 7 : 5;
            os << std::setw(width) << mark;
        }
        os << "\n";
    }
    os << "\nlegend: ok = no violation within budget, viol = violation certified, ! = mismatch "
          "with expected profile\n";
    for (const auto& row : m.rows)
        for (const auto& n : row.notes) os << "note (" << row.preference << "): " << n << "\n";
    if (!m.mismatches.empty()) {
        os << "\nMISMATCHES:\n";
        for (const auto& s : m.mismatches) os << "  " << s << "\n";
    }
    if (!m.consistency_failures.empty()) {
        os << "\nCONSISTENCY FAILURES:\n";
        for (const auto& s : m.consistency_failures) os << "  " << s << "\n";
    }
    os << "\nresult: " << (m.ok() ? "all rows match expected profiles" : "MISMATCH") << "\n";
    return os.str();
}

template <class S>
std::string order_verdict_to_json(const OrderVerdict<S>& v) {
    Json out{{"relation", v.geq ? "geq" : "lt_or_incomparable"}};
    out["witness"] = v.witness ? Json(scalar_to_json(*v.witness)) : Json(nullptr);
    return out.dump();
}

template std::string dist_to_json<Rat>(const ExactDist&);
template std::string dist_to_json<double>(const FloatDist&);
template ExactDist dist_from_json<Rat>(const std::string&);
template FloatDist dist_from_json<double>(const std::string&);
template std::string joint_to_json<Rat>(const ExactJoint&);
template std::string joint_to_json<double>(const FloatJoint&);
template ExactJoint joint_from_json<Rat>(const std::string&);
template FloatJoint joint_from_json<double>(const std::string&);
template std::string report_to_json<Rat>(const AuditReport<Rat>&);
template std::string report_to_json<double>(const AuditReport<double>&);
template std::string report_to_table<Rat>(const AuditReport<Rat>&);
template std::string report_to_table<double>(const AuditReport<double>&);
template std::string trace_to_jsonl<Rat>(const IterationTrace<Rat>&);
template std::string trace_to_jsonl<double>(const IterationTrace<double>&);
template std::string order_verdict_to_json<Rat>(const OrderVerdict<Rat>&);
template std::string order_verdict_to_json<double>(const OrderVerdict<double>&);

}  // namespace divrisk
