#pragma once

// Closed-form resonant dynamics in the rotating-wave approximation, valid in
// the weak-coupling, sudden-resonance limit. Amplitudes are in the
// interaction representation with zero relative coupling phase.

#include <complex>

#include "qmem/qubit.hpp"

namespace qmem {

struct RwaAmplitudes {
  std::complex<double> c00;
  std::complex<double> c01;
  std::complex<double> c10;
  std::complex<double> c11;

  double norm() const;
};

/// Resonant evolution from alpha|00> + beta|10> for a time t >= 0.
RwaAmplitudes rwa_storage(const QubitState& q, double omega_rabi, double t);

/// Resonant evolution from a stored state alpha|00> + beta|01>, elapsed time
/// dt = t - t1 >= 0 since resonance was re-established.
RwaAmplitudes rwa_retrieval(const RwaAmplitudes& stored, double omega_rabi, double dt);

}  // namespace qmem
