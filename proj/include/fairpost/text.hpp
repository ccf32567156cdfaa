#pragma once

#include <string>

namespace fairpost {

/// Locale-independent round-trip formatting for report and policy files.
/// Infinities serialize as "inf" / "-inf".
std::string format_double(double v);

double parse_double(const std::string& token);

}  // namespace fairpost
