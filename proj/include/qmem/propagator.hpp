#pragma once

// Time integration of the amplitude equations in the instantaneous
// interaction representation,
//
//   i dc_k/dt = sum_k' <k| dH - i sdot d/ds |k'> exp(i(theta_k - theta_k')) c_k',
//   dtheta_k/dt = E_k(s(t)),
//
// plus an independent moving-basis Schroedinger integrator used as a
// cross-check.

#include <cstddef>
#include <span>
#include <vector>

#include "qmem/basis.hpp"
#include "qmem/schedule.hpp"

namespace qmem {

/// Interaction-representation amplitudes c_k with accumulated dynamical
/// phases theta_k = int_{t0}^t E_k dt'.
struct AmplitudeState {
  std::vector<cplx> c;
  std::vector<double> theta;
  double t = 0.0;

  static AmplitudeState zero(std::size_t dim, double t = 0.0);
  std::size_t dim() const { return c.size(); }
  double norm() const;
};

/// |<a|b>|^2 on the amplitude vectors.
double overlap_squared(std::span<const cplx> a, std::span<const cplx> b);

enum class Method { adaptive_rk45, fixed_rk4 };

struct IntegratorOptions {
  Method method = Method::adaptive_rk45;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.05;    ///< ns
  double fixed_step = 0.0;   ///< ns; 0 picks 0.05 / max energy gap
  std::size_t samples = 2000;
  double norm_guard = 1e-6;  ///< abort when the norm drifts further than this
  double min_step = 1e-10;   ///< ns; smaller adaptive steps abort
  double refresh_threshold = 0.0;  ///< rebuild matrices once s moves further; 0 rebuilds on every change

  void validate() const;
};

/// Coupling and d/ds matrices at one bias, shared by both frames.
struct FrameMatrices {
  double s = 0.0;
  std::vector<double> energies;
  OperatorMatrix interaction;
  OperatorMatrix dds;

  static FrameMatrices build(const Model& model, BiasPoint b);
};

struct AmplitudeDerivative {
  std::vector<cplx> dc;
  std::vector<double> dtheta;
};

/// Right-hand side of the interaction-representation equations.
AmplitudeDerivative rhs(const AmplitudeState& state, double sdot, const FrameMatrices& matrices);

struct TrajectorySample {
  AmplitudeState state;
  double s = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  ///< sorted by time, first is the initial state
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_calls = 0;

  const AmplitudeState& final_state() const { return samples.back().state; }
  /// Sample whose time is closest to t.
  const TrajectorySample& at(double t) const;
};

/// Integrates from initial.t to the end of the schedule. Samples are taken at
/// opts.samples evenly spaced times, every segment boundary, and every time in
/// `extra_times`.
Trajectory propagate(const Model& model, const AmplitudeState& initial,
                     const BiasSchedule& schedule, const IntegratorOptions& opts,
                     std::span<const double> extra_times = {});

/// Integrates the same equations backwards from final.t to t = 0.
AmplitudeState propagate_backward(const Model& model, const AmplitudeState& final,
                                  const BiasSchedule& schedule, const IntegratorOptions& opts);

/// Integrates i dpsi/dt = (E + dH - i sdot d/ds) psi for the moving-basis
/// amplitudes psi_k = c_k exp(-i theta_k) and strips the phases on output, so
/// samples are directly comparable with `propagate`.
Trajectory propagate_lab_frame(const Model& model, const AmplitudeState& initial,
                               const BiasSchedule& schedule, const IntegratorOptions& opts,
                               std::span<const double> extra_times = {});

/// int_{t_from}^{t_to} E_k(s(t)) dt for every basis state (negative when
/// t_to < t_from).
std::vector<double> phase_integral(const Model& model, const BiasSchedule& schedule,
                                   double t_from, double t_to);

/// Largest |E_k - E_k'| reachable along the schedule.
double max_energy_gap(const Model& model, const BiasSchedule& schedule);

}  // namespace qmem
