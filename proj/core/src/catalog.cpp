#include "divrisk/catalog.hpp"

#include "divrisk/dsl.hpp"

#include <stdexcept>

namespace divrisk {

namespace {

// class order: All, ID, CM, AM, AM&ID, IN, IN&ID, EX
constexpr std::array<bool, 8> kAll8True = {true, true, true, true, true, true, true, true};
constexpr std::array<bool, 8> kAll8False = {false, false, false, false, false, false, false, false};

CatalogEntry make(std::string name, std::string dsl, bool compact, bool monotone,
                  ExpectedProfile profile) {
    Preference p = parse_preference(dsl);
    // entries built on a dual weight claim comonotonic affinity for an
    // increasing weight; verify the claim at registration
    for (const auto& c : p.criteria()) {
        if (c.spec->kind == NodeKind::Dual && !c.spec->pw->increasing_on_unit_interval())
            throw std::logic_error("catalog entry '" + name + "': dual weight is not increasing");
    }
    return {std::move(name), std::move(dsl), std::move(p), compact, monotone, std::move(profile)};
}

std::vector<CatalogEntry> build() {
    std::vector<CatalogEntry> out;

    // Dual utility with increasing weight 2t: affine on comonotonic pairs,
    // strongly risk seeking; mixing under any other coupling concentrates the
    // law, which it dislikes.
    out.push_back(make(
        "DualIncreasing", "total(dual(poly(0, 2)), higher)", true, true,
        {{false, false, true, false, false, false, false, false},
         kAll8True,
         false, false, true, true}));

    // Essential supremum: additive on comonotonic and on independent pairs,
    // strongly risk seeking, not compact continuous.
    out.push_back(make(
        "EssSup", "total(esssup, higher)", false, true,
        {{false, false, true, false, false, true, true, false},
         kAll8True,
         false, false, true, true}));

    // Incomplete mean-variance: mixing never raises variance at equal means,
    // so diversification holds on every class and anti-diversification on none.
    out.push_back(make(
        "MeanVariancePareto", "pareto([(mean, higher), (var, lower)])", true, true,
        {kAll8True,
         kAll8False,
         true, true, false, false}));

    // Mean penalized by Var|2 - Var|: weakly risk averse, yet mixing can move
    // the variance toward 2 where the penalty vanishes, or away from it.
    out.push_back(make(
        "WeirdVar", "total(mean - var * abs(2 - var), higher)", true, true,
        {kAll8False,
         kAll8False,
         true, false, false, false}));

    // Mean minus Var^(1/4): strongly risk averse, so it diversifies on every
    // identically-distributed class, but a constant paired with a gamble breaks
    // diversification on the unrestricted dependence classes.
    out.push_back(make(
        "MeanVarQuarter", "total(mean - pow(var, 1/4), higher)", true, true,
        {{false, true, false, false, true, false, true, true},
         kAll8False,
         true, true, false, false}));

    // E[e^(2X)]/E[e^X], lower better: diversifies on independent pairs by a
    // geometric mixing bound, weakly but not strongly risk averse.
    out.push_back(make(
        "ExpRatio", "total(expmom(2) / expmom(1), lower)", true, false,
        {{false, false, true, true, true, true, true, false},
         {false, false, true, false, false, false, false, false},
         true, false, false, false}));

    // The mean: risk neutral; every mix of equally-ranked payoffs keeps the mean.
    out.push_back(make(
        "MeanOnly", "total(mean, higher)", true, true,
        {kAll8True,
         kAll8True,
         true, true, true, true}));

    // (E[X])^2: risk neutral but not monotone; pairs with opposite means break
    // diversification outside the identically-distributed classes.
    out.push_back(make(
        "MeanSquared", "total(pow(mean, 2), higher)", true, false,
        {{false, true, false, false, true, false, true, true},
         kAll8True,
         true, true, true, true}));

    return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw std::invalid_argument("no catalog preference named '" + name + "'");
}

}  // namespace divrisk
