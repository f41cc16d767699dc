#pragma once

#include <string>

namespace floatchain {

/// Shortest decimal string that round-trips to the same double.
std::string format_shortest(double value);

/// printf-style %.<digits>g.
std::string format_g(double value, int digits);

/// Value rounded to `digits` significant digits (used for report fields so
/// the serialized form is stable across platforms).
double round_significant(double value, int digits = 12);

} // namespace floatchain
