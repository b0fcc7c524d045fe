#include "qmem/junction.hpp"

#include <cmath>
#include <string>

#include "qmem/units.hpp"

namespace qmem {

DeviceParams DeviceParams::from_lab_units(double ej_mev, double ec_nev, double f0_ghz,
                                          double g_ratio) {
  if (!(ej_mev > 0.0)) throw ConfigError("E_J must be positive (meV)");
  if (!(ec_nev > 0.0)) throw ConfigError("E_c must be positive (neV)");
  if (!(f0_ghz > 0.0)) throw ConfigError("resonator frequency must be positive (GHz)");
  if (!(g_ratio >= 0.0) || !std::isfinite(g_ratio))
    throw ConfigError("coupling ratio g/hbar*omega0 must be finite and non-negative");
  DeviceParams p;
  p.e_j = units::mev_to_rad_per_ns(ej_mev);
  p.e_c = units::nev_to_rad_per_ns(ec_nev);
  p.omega0 = units::ghz_to_rad_per_ns(f0_ghz);
  p.g = g_ratio * p.omega0;
  p.validate();
  return p;
}

double DeviceParams::ej_mev() const { return e_j * units::kHbarEvS * 1e9 * 1e3; }
double DeviceParams::ec_nev() const { return e_c * units::kHbarEvS * 1e9 * 1e9; }
double DeviceParams::f0_ghz() const { return units::rad_per_ns_to_ghz(omega0); }
double DeviceParams::g_ratio() const { return g / omega0; }

DeviceParams DeviceParams::with_g_ratio(double g_ratio) const {
  DeviceParams p = *this;
  p.g = g_ratio * omega0;
  p.validate();
  return p;
}

void DeviceParams::validate() const {
  if (!(e_j > 0.0) || !(e_c > 0.0) || !(omega0 > 0.0))
    throw ConfigError("device energies and frequency must be positive");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("coupling must be non-negative");
  if (e_c / e_j > kMaxChargingRatio)
    throw ConfigError("E_c/E_J = " + std::to_string(e_c / e_j) +
                      " is outside the harmonic regime (limit 1e-3)");
  if (omega0 > plasma_frequency(*this))
    throw ResonanceUnreachable("resonance unreachable: resonator frequency " +
                               std::to_string(f0_ghz()) + " GHz exceeds plasma frequency " +
                               std::to_string(units::rad_per_ns_to_ghz(plasma_frequency(*this))) +
                               " GHz");
}

bool bias_in_domain(double s) { return s >= 0.0 && s < BiasPoint::kMaxBias; }

BiasPoint::BiasPoint(double s) : s_(s) {
  if (!bias_in_domain(s))
    throw ConfigError("bias s = " + std::to_string(s) + " outside [0, 0.99)");
}

double plasma_frequency(const DeviceParams& p) { return std::sqrt(2.0 * p.e_c * p.e_j); }

double level_spacing(const DeviceParams& p, BiasPoint b) {
  const double s = b.value();
  return plasma_frequency(p) * std::pow(1.0 - s * s, 0.25);
}

BiasPoint resonant_bias(const DeviceParams& p) {
  const double ratio = p.omega0 / plasma_frequency(p);
  const double r4 = ratio * ratio * ratio * ratio;
  if (r4 > 1.0)
    throw ResonanceUnreachable("resonance unreachable: omega0/omega_p0 = " +
                               std::to_string(ratio) + " > 1");
  return BiasPoint(std::sqrt(1.0 - r4));
}

double oscillator_length(const DeviceParams& p, BiasPoint b) {
  const double s = b.value();
  return std::pow(2.0 * p.e_c / p.e_j, 0.25) * std::pow(1.0 - s * s, -0.125);
}

double dipole_moment(const DeviceParams& p, BiasPoint b) {
  return oscillator_length(p, b) / std::numbers::sqrt2;
}

double rabi_frequency(const DeviceParams& p, BiasPoint b) {
  return 2.0 * p.g * dipole_moment(p, b);
}

}  // namespace qmem
