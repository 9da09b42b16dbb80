#pragma once

#include <array>
#include <optional>
#include <string>

namespace divrisk {

/// Dependence classes over which diversification properties are audited.
enum class PairClass {
    All = 0,
    Id,
    Comonotonic,
    Antimonotonic,
    AmAndId,
    Independent,
    InAndId,
    Exchangeable,
};

inline constexpr std::array<PairClass, 8> all_pair_classes = {
    PairClass::All,         PairClass::Id,      PairClass::Comonotonic,
    PairClass::Antimonotonic, PairClass::AmAndId, PairClass::Independent,
    PairClass::InAndId,     PairClass::Exchangeable,
};

inline const char* pair_class_name(PairClass c) {
    switch (c) {
        case PairClass::All: return "All";
        case PairClass::Id: return "ID";
        case PairClass::Comonotonic: return "Comonotonic";
        case PairClass::Antimonotonic: return "Antimonotonic";
        case PairClass::AmAndId: return "AM_and_ID";
        case PairClass::Independent: return "Independent";
        case PairClass::InAndId: return "IN_and_ID";
        case PairClass::Exchangeable: return "Exchangeable";
    }
    return "?";
}

inline std::optional<PairClass> pair_class_from_name(const std::string& s) {
    for (PairClass c : all_pair_classes)
        if (s == pair_class_name(c)) return c;
    return std::nullopt;
}

}  // namespace divrisk
