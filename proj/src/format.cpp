#include "floatchain/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace floatchain {

std::string format_shortest(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string format_g(double value, int digits) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*g", digits, value);
    return buf.data();
}

double round_significant(double value, int digits) {
    if (!std::isfinite(value) || value == 0.0) return value;
    return std::strtod(format_g(value, digits).c_str(), nullptr);
}

} // namespace floatchain
