#pragma once

// Storage and retrieval of a junction qubit in the resonator: adiabatic
// tune-in, pi/Omega resonant dwell, detune, storage hold, tune-in,
// 3 pi/Omega resonant dwell, detune, averaging window.

#include <string>
#include <utility>
#include <vector>

#include "qmem/propagator.hpp"
#include "qmem/qubit.hpp"
#include "qmem/schedule.hpp"

namespace qmem {

struct ProtocolOptions {
  double s_off = 0.407;
  double ramp_ns = 1.0;
  double store_hold_ns = 5.0;
  double initial_hold_ns = 0.0;
  RampShape ramp_shape = RampShape::smoothstep;
  std::size_t window_samples = 64;

  void validate() const;
};

/// A bias program together with the landmark times of the protocol.
struct MemorySchedule {
  BiasSchedule schedule;
  double s_star = 0.0;
  double s_off = 0.0;
  double omega_rabi = 0.0;  ///< rad/ns
  double storage_start = 0.0;
  double storage_end = 0.0;
  double retrieval_start = 0.0;
  double retrieval_end = 0.0;
  double retrieved_at = 0.0;  ///< end of the final detune ramp; averaging starts here
  double window_ns = 0.0;
  std::vector<std::string> warnings;

  /// pi/Omega + 3 pi/Omega
  double resonant_dwell_ns() const { return (storage_end - storage_start) + (retrieval_end - retrieval_start); }
  double total_ns() const { return schedule.total_duration(); }
};

MemorySchedule build_memory_schedule(const DeviceParams& p, BiasPoint s_off, double ramp_ns,
                                     double store_hold_ns, RampShape shape = RampShape::smoothstep,
                                     double initial_hold_ns = 0.0);

MemorySchedule build_memory_schedule(const DeviceParams& p, const ProtocolOptions& opts);

/// Smallest storage hold >= min_hold_ns for which the stored excitation's
/// detuned phase, int (E_10 - E_01) dt from storage_end to retrieval_start, is
/// a multiple of 2 pi. Retrieval then restores the original relative phase.
double phase_matched_hold(const Model& model, const ProtocolOptions& opts, double min_hold_ns);

/// c_00 = alpha, c_10 = beta, everything else zero, phases zeroed.
AmplitudeState initial_amplitudes(const QubitState& q, const ProductBasis& basis);

/// Initial amplitudes with the phase origin placed at the moment resonance is
/// first reached (storage_start): theta_k(0) = -int_0^{storage_start} E_k dt.
/// Off resonance the interaction-representation amplitudes are nearly frozen,
/// so c(storage_start) = (alpha, beta) up to nonadiabatic corrections.
AmplitudeState protocol_initial_state(const QubitState& q, const Model& model,
                                      const MemorySchedule& schedule);

/// |alpha* c_00 + beta* c_10|^2
double fidelity_squared(const QubitState& q, const AmplitudeState& state, const ProductBasis& basis);

/// |alpha* c_00 + beta* c_01|^2, occupation of the resonator-stored state.
double stored_occupation(const QubitState& q, const AmplitudeState& state,
                         const ProductBasis& basis);

struct TracePoint {
  double t = 0.0;
  double s = 0.0;
  double f2 = 0.0;
  double stored = 0.0;
  double norm = 0.0;
};

struct MemoryResult {
  std::vector<TracePoint> trace;
  double f2_mean = 0.0;
  double f2_min = 0.0;
  double f2_max = 0.0;
  double f2_final = 0.0;
  double stored_after_storage = 0.0;  ///< stored-state occupation right after the pi/Omega dwell
  double final_norm = 0.0;
  MemorySchedule schedule_used;
  Trajectory trajectory;
  std::vector<std::string> warnings;

  double resonant_dwell_ns() const { return schedule_used.resonant_dwell_ns(); }
  double protocol_ns() const { return schedule_used.retrieved_at; }
  double total_ns() const { return schedule_used.total_ns(); }
};

MemoryResult run_memory(const QubitState& q, const Model& model, const MemorySchedule& schedule,
                        const IntegratorOptions& opts, std::size_t window_samples = 64);

struct DetuneResult {
  double s_off = 0.0;
  double f2_mean = 0.0;
  double grid_best_s = 0.0;
  double grid_best_f2 = 0.0;
  std::vector<std::pair<double, double>> trace;  ///< (s_off, f2_mean) in evaluation order
};

struct DetuneSearch {
  double lo = 0.30;
  double hi = 0.50;
  std::size_t grid_points = 21;
  double tolerance = 1e-3;
};

/// Maximises f2_mean over s_off: coarse grid, then golden-section refinement
/// around the best grid point. Ties go to the smaller s_off.
DetuneResult optimize_detuning(const QubitState& q, const Model& model,
                               const ProtocolOptions& protocol, const DetuneSearch& search,
                               const IntegratorOptions& opts, unsigned workers = 1);

}  // namespace qmem
