#pragma once

#include <string>
#include <string_view>

namespace rebus {

// Shortest decimal that reads back to the same double, always containing a
// '.' or an exponent ("0.0", "0.6931471805599453", "1e-300").
std::string format_exact(double value);

// Compact human-facing form: six significant digits, same '.0' rule.
std::string format_short(double value);

// Strict full-string parse of a decimal double; throws std::invalid_argument.
double parse_double(std::string_view text);

}  // namespace rebus
