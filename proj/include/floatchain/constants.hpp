#pragma once

#include <numbers>
#include <string_view>

// SI values (exact since the 2019 redefinition). Everything inside the
// library is SI; unit helpers below are for I/O only.
namespace floatchain::constants {

inline constexpr std::string_view version = "CODATA 2018";

inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge); // Wb
inline constexpr double cooper_pair_charge = 2.0 * elementary_charge;
inline constexpr double reduced_flux_quantum = flux_quantum / (2.0 * std::numbers::pi);

} // namespace floatchain::constants

namespace floatchain::units {

inline constexpr double femto = 1e-15;
inline constexpr double nano = 1e-9;
inline constexpr double mega = 1e6;
inline constexpr double giga = 1e9;

constexpr double from_fF(double c) { return c * femto; }
constexpr double to_fF(double c) { return c / femto; }
constexpr double from_nH(double l) { return l * nano; }
constexpr double to_nH(double l) { return l / nano; }

/// Energy (J) -> E/h in GHz.
constexpr double energy_to_GHz(double e) { return e / constants::planck / giga; }
constexpr double energy_from_GHz(double f) { return f * giga * constants::planck; }

/// Angular frequency (rad/s) -> ordinary frequency.
constexpr double angular_to_GHz(double w) { return w / (2.0 * std::numbers::pi) / giga; }
constexpr double angular_to_MHz(double w) { return w / (2.0 * std::numbers::pi) / mega; }
constexpr double angular_from_GHz(double f) { return f * giga * 2.0 * std::numbers::pi; }

} // namespace floatchain::units
