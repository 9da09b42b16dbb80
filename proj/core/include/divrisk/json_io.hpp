#pragma once

#include "divrisk/audit.hpp"
#include "divrisk/iterate.hpp"
#include "divrisk/orders.hpp"

#include <string>

namespace divrisk {

/// Distribution wire format: {"atoms": [{"v": <number|"p/q">, "p": ...}, ...]}.
/// Exact mode requires rational strings or integers and writes strings.
template <class S>
std::string dist_to_json(const Distribution<S>& d);
template <class S>
Distribution<S> dist_from_json(const std::string& text);

/// Joint wire format: {"x": [...], "y": [...], "p": [[...]], "tags": [...]}.
/// Tags are re-verified on load; a claimed tag that fails verification is an error.
template <class S>
std::string joint_to_json(const Joint<S>& j);
template <class S>
Joint<S> joint_from_json(const std::string& text);

template <class S>
std::string report_to_json(const AuditReport<S>& rep);
template <class S>
std::string report_to_table(const AuditReport<S>& rep);

/// One JSON record per trace step: n, atom count, range, sup and Lp distances, flags.
template <class S>
std::string trace_to_jsonl(const IterationTrace<S>& trace);

std::string matrix_to_json(const MatrixReport& m);
std::string matrix_to_table(const MatrixReport& m);

template <class S>
std::string order_verdict_to_json(const OrderVerdict<S>& v);

}  // namespace divrisk
