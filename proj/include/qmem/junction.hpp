#pragma once

// Closed-form quantities of a large-area current-biased Josephson junction in
// the harmonic limit, coupled to a single resonator mode.

#include "qmem/errors.hpp"

namespace qmem {

/// Physical configuration of the junction-resonator pair.
///
/// Energies are held in internal units (rad/ns, hbar = 1). Construct through
/// `from_lab_units`, which takes the conventional reporting units and
/// validates the harmonic-regime invariants.
struct DeviceParams {
  double e_j = 0.0;     ///< Josephson energy, rad/ns
  double e_c = 0.0;     ///< charging energy, rad/ns
  double omega0 = 0.0;  ///< resonator angular frequency, rad/ns
  double g = 0.0;       ///< coupling energy, rad/ns

  /// E_J in meV, E_c in neV, resonator frequency in GHz, coupling as g/(hbar omega0).
  static DeviceParams from_lab_units(double ej_mev, double ec_nev, double f0_ghz, double g_ratio);

  double ej_mev() const;
  double ec_nev() const;
  double f0_ghz() const;
  double g_ratio() const;

  /// Same device with a different coupling ratio.
  DeviceParams with_g_ratio(double g_ratio) const;

  /// Throws ConfigError (or ResonanceUnreachable) when an invariant fails.
  void validate() const;
};

/// Largest charging-to-Josephson energy ratio accepted as "E_J >> E_c".
inline constexpr double kMaxChargingRatio = 1e-3;

/// Dimensionless bias current s = I_b / I_0, restricted to [0, kMaxBias).
class BiasPoint {
 public:
  static constexpr double kMaxBias = 0.99;

  explicit BiasPoint(double s);
  double value() const { return s_; }

  friend bool operator==(const BiasPoint&, const BiasPoint&) = default;

 private:
  double s_;
};

/// True when `s` is a legal bias value.
bool bias_in_domain(double s);

double plasma_frequency(const DeviceParams& p);

/// Junction level spacing omega_p0 (1 - s^2)^{1/4}.
double level_spacing(const DeviceParams& p, BiasPoint b);

/// Bias at which the level spacing equals the resonator frequency.
BiasPoint resonant_bias(const DeviceParams& p);

/// Width in phase of the harmonic eigenfunctions, (2E_c/E_J)^{1/4} (1-s^2)^{-1/8}.
double oscillator_length(const DeviceParams& p, BiasPoint b);

/// <0|phi|1> for the harmonic eigenfunctions at bias b.
double dipole_moment(const DeviceParams& p, BiasPoint b);

/// Resonant vacuum Rabi frequency 2 g x01. Caller supplies the resonant bias.
double rabi_frequency(const DeviceParams& p, BiasPoint b);

}  // namespace qmem
