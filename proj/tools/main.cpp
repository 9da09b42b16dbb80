// divrisk: finite-support toolkit for stochastic orders, couplings, risk
// functionals, and diversification audits.

#include "divrisk/audit.hpp"
#include "divrisk/dsl.hpp"
#include "divrisk/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace divrisk;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

struct Options {
    std::string mode = "exact";       // exact | float; iterate also accepts coupling names here
    std::string format = "json";      // json | table
    std::string spec, dist, x, y, kind, pref, property, pair_class, out;
    std::string coupling = "antimonotonic";
    uint64_t seed = 0;
    size_t budget = 500;
    size_t steps = 0;
    size_t n = 0;
    std::string p = "2";
};

bool exact_mode(const Options& o) {
    if (o.mode == "exact") return true;
    if (o.mode == "float") return false;
    throw CLI::ValidationError("--mode", "must be 'exact' or 'float'");
}

Preference load_preference(const std::string& text, std::string& dsl_out) {
    for (const auto& e : catalog()) {
        if (e.name == text) {
            dsl_out = e.dsl;
            return e.preference;
        }
    }
    dsl_out = text;
    return parse_preference(text);
}

template <class S>
int run_eval(const Options& o) {
    FunctionalPtr f = parse_functional(o.spec);
    auto d = dist_from_json<S>(read_file(o.dist));
    std::cout << evaluate(f, d).str() << "\n";
    return 0;
}

template <class S>
int run_order(const Options& o) {
    auto dx = dist_from_json<S>(read_file(o.x));
    auto dy = dist_from_json<S>(read_file(o.y));
    double eps = exact_mode(o) ? 0.0 : 1e-9;
    if (o.kind == "icx") {
        bool leq = increasing_convex_order_leq(dx, dy, eps);
        if (o.format == "json")
            std::cout << (leq ? R"({"relation":"leq_icx"})" : R"({"relation":"not_leq_icx"})") << "\n";
        else
            std::cout << (leq ? "leq_icx" : "not_leq_icx") << "\n";
        return 0;
    }
    auto v = concave_order_geq(dx, dy, eps);
    if (o.format == "json") {
        std::cout << order_verdict_to_json(v) << "\n";
    } else {
        std::cout << (v.geq ? "geq" : "lt_or_incomparable");
        if (v.witness) std::cout << " witness=" << scalar_traits<S>::str(*v.witness);
        std::cout << "\n";
    }
    return 0;
}

template <class S>
int run_couple(const Options& o) {
    auto dx = dist_from_json<S>(read_file(o.x));
    auto dy = dist_from_json<S>(read_file(o.y));
    std::optional<Joint<S>> j;
    if (o.kind == "comonotonic") j = comonotonic_pair(dx, dy);
    else if (o.kind == "antimonotonic") j = antimonotonic_pair(dx, dy);
    else if (o.kind == "independent") j = independent_pair(dx, dy);
    else if (o.kind == "martingale") {
        auto m = martingale_coupling(dx, dy);
        if (!m.feasible()) {
            std::cout << R"({"infeasible": ")" << m.reason << "\"}\n";
            return 0;
        }
        j = std::move(m.joint);
    } else {
        throw CLI::ValidationError("--kind", "unknown coupling kind '" + o.kind + "'");
    }
    std::string payload = joint_to_json(*j) + "\n";
    if (o.out.empty()) std::cout << payload;
    else write_file(o.out, payload);
    return 0;
}

template <class S>
int run_audit(const Options& o) {
    std::string dsl;
    Preference pref = load_preference(o.pref, dsl);
    AuditConfig cfg;
    cfg.seed = o.seed;
    cfg.pair_budget = o.budget;
    cfg.mode = exact_mode(o) ? NumericMode::exact() : NumericMode::floating();
    auto prop = audit_property_from_name(o.property);
    if (!prop)
        throw CLI::ValidationError("--property", "unknown property '" + o.property + "'");
    AuditReport<S> rep;
    if (*prop == AuditProperty::Diversification || *prop == AuditProperty::AntiDiversification) {
        auto cls = pair_class_from_name(o.pair_class);
        if (!cls)
            throw CLI::ValidationError("--class", "unknown pair class '" + o.pair_class + "'");
        rep = *prop == AuditProperty::Diversification
                  ? check_diversification<S>(pref, dsl, *cls, cfg)
                  : check_anti_diversification<S>(pref, dsl, *cls, cfg);
    } else if (*prop == AuditProperty::WeakRiskAversion) {
        rep = check_weak_risk_attitude<S>(pref, dsl, false, cfg);
    } else if (*prop == AuditProperty::WeakRiskSeeking) {
        rep = check_weak_risk_attitude<S>(pref, dsl, true, cfg);
    } else if (*prop == AuditProperty::StrongRiskAversion) {
        rep = check_strong_risk_attitude<S>(pref, dsl, false, cfg);
    } else {
        rep = check_strong_risk_attitude<S>(pref, dsl, true, cfg);
    }
    std::cout << (o.format == "table" ? report_to_table(rep) : report_to_json(rep) + "\n");
    return 0;
}

template <class S>
int run_iterate(const Options& o) {
    auto d = dist_from_json<S>(read_file(o.dist));
    CouplingMode cm =
        o.coupling == "independent" ? CouplingMode::Independent : CouplingMode::Antimonotonic;
    auto trace = run_sequence(d, cm, o.steps, parse_rational(o.p));
    std::cout << trace_to_jsonl(trace);
    return 0;
}

template <class S>
int run_lln(const Options& o) {
    auto d = dist_from_json<S>(read_file(o.dist));
    auto trace = dyadic_baseline(d, o.n, parse_rational(o.p));
    std::cout << trace_to_jsonl(trace);
    return 0;
}

int run_matrix(const Options& o) {
    AuditConfig cfg;
    cfg.seed = o.seed;
    cfg.pair_budget = o.budget;
    MatrixReport m = implication_matrix(cfg);
    std::cout << (o.format == "table" ? matrix_to_table(m) : matrix_to_json(m) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-support stochastic orders, couplings and diversification audits"};
    app.require_subcommand(1);
    Options o;

    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", o.mode, "numeric mode: exact | float")->capture_default_str();
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "output format: json | table")->capture_default_str();
    };

    auto* eval = app.add_subcommand("eval", "evaluate a functional on a distribution");
    eval->add_option("--spec", o.spec, "functional expression")->required();
    eval->add_option("--dist", o.dist, "distribution JSON file")->required();
    add_mode(eval);

    auto* order = app.add_subcommand("order", "test the concave order between two distributions");
    order->add_option("--x", o.x, "X distribution JSON file")->required();
    order->add_option("--y", o.y, "Y distribution JSON file")->required();
    order->add_option("--relation", o.kind, "cv (default) | icx");
    add_mode(order);
    add_format(order);

    auto* couple = app.add_subcommand("couple", "construct a coupling of two marginals");
    couple->add_option("--x", o.x, "X marginal JSON file")->required();
    couple->add_option("--y", o.y, "Y marginal JSON file")->required();
    couple->add_option("--kind", o.kind,
                       "comonotonic | antimonotonic | independent | martingale")->required();
    couple->add_option("--out", o.out, "output file (stdout when omitted)");
    add_mode(couple);

    auto* audit = app.add_subcommand("audit", "search for a property violation");
    audit->add_option("--pref", o.pref, "catalog name or preference DSL")->required();
    audit->add_option("--property", o.property,
                      "diversification | anti-diversification | weak-risk-aversion | "
                      "weak-risk-seeking | strong-risk-aversion | strong-risk-seeking")->required();
    audit->add_option("--class", o.pair_class, "pair class for diversification properties");
    audit->add_option("--seed", o.seed, "search seed")->capture_default_str();
    audit->add_option("--budget", o.budget, "pair budget")->capture_default_str();
    add_mode(audit);
    add_format(audit);

    auto* iterate = app.add_subcommand("iterate", "run an averaging sequence");
    iterate->add_option("--dist", o.dist, "distribution JSON file")->required();
    iterate->add_option("--steps", o.steps, "number of steps")->required();
    iterate->add_option("--coupling", o.coupling, "antimonotonic | independent")
        ->capture_default_str();
    iterate->add_option("--p", o.p, "Lp exponent")->capture_default_str();
    // --mode accepts the coupling name as well, so `--mode antimonotonic` works
    std::string iterate_mode;
    iterate->add_option("--mode", iterate_mode, "exact | float | antimonotonic | independent");

    auto* lln = app.add_subcommand("lln", "i.i.d. dyadic-average baseline distances");
    lln->add_option("--dist", o.dist, "distribution JSON file")->required();
    lln->add_option("--n", o.n, "number of doubling steps")->required();
    lln->add_option("--p", o.p, "Lp exponent")->capture_default_str();
    add_mode(lln);

    auto* matrix = app.add_subcommand("matrix", "full implication matrix over the catalog");
    matrix->add_option("--seed", o.seed, "search seed")->capture_default_str();
    matrix->add_option("--budget", o.budget, "pair budget per check")->capture_default_str();
    add_format(matrix);

    try {
        app.parse(argc, argv);
        if (iterate->parsed() && !iterate_mode.empty()) {
            if (iterate_mode == "antimonotonic" || iterate_mode == "independent")
                o.coupling = iterate_mode;
            else
                o.mode = iterate_mode;
        }
        const bool exact = exact_mode(o);
        if (eval->parsed()) return exact ? run_eval<Rat>(o) : run_eval<double>(o);
        if (order->parsed()) {
            if (o.kind.empty()) o.kind = "cv";
            return exact ? run_order<Rat>(o) : run_order<double>(o);
        }
        if (couple->parsed()) return exact ? run_couple<Rat>(o) : run_couple<double>(o);
        if (audit->parsed()) return exact ? run_audit<Rat>(o) : run_audit<double>(o);
        if (iterate->parsed()) return exact ? run_iterate<Rat>(o) : run_iterate<double>(o);
        if (lln->parsed()) return exact ? run_lln<Rat>(o) : run_lln<double>(o);
        if (matrix->parsed()) return run_matrix(o);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
