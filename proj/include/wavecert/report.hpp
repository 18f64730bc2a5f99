#pragma once

#include <json.hpp>

#include <string>

namespace wavecert {

using ReportTree = nlohmann::ordered_json;

/// Deterministic JSON text: insertion-ordered keys, two-space indentation,
/// floating-point values with 17 significant digits, non-finite values as
/// the strings "inf", "-inf", "nan".
std::string write_report(const ReportTree& tree);

/// Copy of `tree` with every "duration_s" member removed, for comparisons.
ReportTree without_durations(const ReportTree& tree);

} // namespace wavecert
