#pragma once

// Internal unit system: hbar = 1, time in ns, energy expressed as an angular
// frequency in rad/ns.

#include <numbers>

namespace qmem::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduced Planck constant, CODATA 2018, in eV s.
inline constexpr double kHbarEvS = 6.582119569e-16;

/// Energy in eV to angular frequency in rad/ns.
constexpr double ev_to_rad_per_ns(double ev) { return ev / kHbarEvS * 1e-9; }
constexpr double mev_to_rad_per_ns(double mev) { return ev_to_rad_per_ns(mev * 1e-3); }
constexpr double nev_to_rad_per_ns(double nev) { return ev_to_rad_per_ns(nev * 1e-9); }

constexpr double ghz_to_rad_per_ns(double f_ghz) { return kTwoPi * f_ghz; }
constexpr double rad_per_ns_to_ghz(double omega) { return omega / kTwoPi; }

}  // namespace qmem::units
