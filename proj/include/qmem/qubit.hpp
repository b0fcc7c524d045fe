#pragma once

#include <complex>

namespace qmem {

/// Junction qubit state alpha|0> + beta|1>.
struct QubitState {
  std::complex<double> alpha{1.0, 0.0};
  std::complex<double> beta{0.0, 0.0};

  /// cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>
  static QubitState from_bloch(double theta, double phi);
  /// Throws ConfigError unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
  static QubitState from_amplitudes(std::complex<double> alpha, std::complex<double> beta);

  /// Equator state (|0> + |1>)/sqrt2.
  static QubitState equator_x();

  double bloch_theta() const;
  double bloch_phi() const;
};

}  // namespace qmem
