#pragma once

#include "divrisk/pair_class.hpp"
#include "divrisk/preference.hpp"

#include <array>
#include <string>
#include <vector>

namespace divrisk {

/// Expected audit outcome per property for a catalog preference:
/// true = holds (audit should find no violation), false = a violation exists
/// and the audit is expected to certify one.
struct ExpectedProfile {
    std::array<bool, 8> diversification{};       // indexed by PairClass
    std::array<bool, 8> anti_diversification{};  // indexed by PairClass
    bool weak_risk_aversion = false;
    bool strong_risk_aversion = false;
    bool weak_risk_seeking = false;
    bool strong_risk_seeking = false;
};

struct CatalogEntry {
    std::string name;
    std::string dsl;  // preference in DSL form; parsed into `preference`
    Preference preference;
    bool compact_continuous = true;    // bounded-convergence continuity of the functional
    bool monotone_on_constants = true; // x >= y in R implies x weakly preferred
    ExpectedProfile expected;
};

/// The eight built-in preferences with their expected implication-matrix rows.
const std::vector<CatalogEntry>& catalog();

const CatalogEntry& catalog_entry(const std::string& name);

}  // namespace divrisk
