#pragma once

#include "divrisk/preference.hpp"

#include <string>

namespace divrisk {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses the functional expression language:
///   expr   := term {("+"|"-") term}
///   term   := factor {("*"|"/") factor}
///   factor := ["-"] primary
///   primary:= number | "mean" | "var" | "esssup" | "essinf"
///           | "quantile(" number ")" | "stoploss(" number ")" | "expmom(" number ")"
///           | "eu(" pw ")" | "dual(" pw ")" | "abs(" expr ")"
///           | "pow(" expr "," number ")" | "(" expr ")"
///   pw     := "poly(" number {"," number} ")"
///           | "pieces(" "[" number "," number "]" poly {";" ...} ")"
/// Numbers are integers, decimals, or "p/q"; a quotient of two constants folds
/// into a rational constant, so printed rationals reparse to the same AST.
FunctionalPtr parse_functional(const std::string& text);

/// Canonical text form; parse_functional(print_functional(f)) == f.
std::string print_functional(const FunctionalPtr& f);

/// "total(<expr>, higher|lower)" or "pareto([(expr, dir), ...])".
Preference parse_preference(const std::string& text);
std::string print_preference(const Preference& p);

}  // namespace divrisk
