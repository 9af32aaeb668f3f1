#pragma once

#include <string>
#include <vector>

namespace ubound {

/// Decimal form with 17 significant digits (round-trips any double; prints
/// "inf" for infinities).
std::string format_full(double x);

/// Strict double parse; accepts "inf"/"-inf", throws std::runtime_error on
/// anything else that is not a full numeric token.
double parse_double(const std::string& token);

/// Split a line on commas (no quoting rules; fields are trimmed of spaces).
std::vector<std::string> split_csv(const std::string& line);

}  // namespace ubound
