#include "qmem/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "qmem/errors.hpp"
#include "qmem/parallel.hpp"
#include "qmem/units.hpp"

namespace qmem {

QubitState QubitState::from_bloch(double theta, double phi) {
  return {std::cos(0.5 * theta), std::sin(0.5 * theta) * std::polar(1.0, phi)};
}

QubitState QubitState::from_amplitudes(std::complex<double> alpha, std::complex<double> beta) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > 1e-12) throw ConfigError("qubit state is not normalized");
  return {alpha, beta};
}

QubitState QubitState::equator_x() { return from_bloch(units::kPi / 2, 0.0); }

double QubitState::bloch_theta() const { return 2.0 * std::atan2(std::abs(beta), std::abs(alpha)); }

double QubitState::bloch_phi() const {
  if (std::abs(beta) == 0.0) return 0.0;
  double phi = std::arg(beta) - (std::abs(alpha) > 0.0 ? std::arg(alpha) : 0.0);
  phi = std::fmod(phi, units::kTwoPi);
  return phi < 0.0 ? phi + units::kTwoPi : phi;
}

void ProtocolOptions::validate() const {
  if (!bias_in_domain(s_off)) throw ConfigError("s_off outside [0, 0.99)");
  if (!(ramp_ns >= 0.0)) throw ConfigError("ramp_ns must be non-negative");
  if (!(store_hold_ns >= 0.0)) throw ConfigError("store_hold_ns must be non-negative");
  if (!(initial_hold_ns >= 0.0)) throw ConfigError("initial_hold_ns must be non-negative");
  if (window_samples < 2) throw ConfigError("window_samples must be at least 2");
}

MemorySchedule build_memory_schedule(const DeviceParams& p, BiasPoint s_off, double ramp_ns,
                                     double store_hold_ns, RampShape shape,
                                     double initial_hold_ns) {
  if (p.g <= 0.0) throw ConfigError("zero coupling: Rabi frequency undefined");
  if (!(ramp_ns >= 0.0) || !(store_hold_ns >= 0.0) || !(initial_hold_ns >= 0.0))
    throw ConfigError("schedule durations must be non-negative");
  const BiasPoint s_star = resonant_bias(p);
  const double off = s_off.value();
  const double res = s_star.value();
  if (std::abs(off - res) < 1e-9)
    throw ConfigError("s_off equals the resonant bias; the storage hold would stay on resonance");
  const double omega = rabi_frequency(p, s_star);
  const double store_dwell = units::kPi / omega;
  const double retrieve_dwell = 3.0 * units::kPi / omega;

  MemorySchedule ms;
  ms.s_star = res;
  ms.s_off = off;
  ms.omega_rabi = omega;
  ms.window_ns = units::kTwoPi / omega;
  if (ramp_ns == 0.0)
    ms.warnings.push_back(
        "ramp_ns = 0: bias switches instantaneously; the jump's nonadiabatic transitions are not "
        "integrated");

  std::vector<Segment> segs{
      Segment::hold(off, initial_hold_ns),      Segment::ramp(off, res, ramp_ns, shape),
      Segment::hold(res, store_dwell),          Segment::ramp(res, off, ramp_ns, shape),
      Segment::hold(off, store_hold_ns),        Segment::ramp(off, res, ramp_ns, shape),
      Segment::hold(res, retrieve_dwell),       Segment::ramp(res, off, ramp_ns, shape),
      Segment::hold(off, ms.window_ns),
  };
  ms.storage_start = initial_hold_ns + ramp_ns;
  ms.storage_end = ms.storage_start + store_dwell;
  ms.retrieval_start = ms.storage_end + ramp_ns + store_hold_ns + ramp_ns;
  ms.retrieval_end = ms.retrieval_start + retrieve_dwell;
  ms.retrieved_at = ms.retrieval_end + ramp_ns;
  ms.schedule = BiasSchedule(std::move(segs));
  return ms;
}

double phase_matched_hold(const Model& model, const ProtocolOptions& opts, double min_hold_ns) {
  ProtocolOptions base = opts;
  base.store_hold_ns = min_hold_ns;
  const MemorySchedule ms = build_memory_schedule(model.device, base);
  const auto ph = phase_integral(model, ms.schedule, ms.storage_end, ms.retrieval_start);
  const auto& b = model.basis;
  const double chi = ph[b.index(1, 0)] - ph[b.index(0, 1)];
  const double rate = level_spacing(model.device, BiasPoint(ms.s_off)) - model.device.omega0;
  const double turns = chi / units::kTwoPi;
  const double k = rate > 0.0 ? std::ceil(turns) : std::floor(turns);
  return min_hold_ns + (units::kTwoPi * k - chi) / rate;
}

MemorySchedule build_memory_schedule(const DeviceParams& p, const ProtocolOptions& opts) {
  opts.validate();
  return build_memory_schedule(p, BiasPoint(opts.s_off), opts.ramp_ns, opts.store_hold_ns,
                               opts.ramp_shape, opts.initial_hold_ns);
}

AmplitudeState initial_amplitudes(const QubitState& q, const ProductBasis& basis) {
  AmplitudeState st = AmplitudeState::zero(basis.dim());
  st.c[basis.index(0, 0)] = q.alpha;
  st.c[basis.index(1, 0)] = q.beta;
  return st;
}

AmplitudeState protocol_initial_state(const QubitState& q, const Model& model,
                                      const MemorySchedule& ms) {
  AmplitudeState st = initial_amplitudes(q, model.basis);
  st.theta = phase_integral(model, ms.schedule, ms.storage_start, 0.0);
  return st;
}

double fidelity_squared(const QubitState& q, const AmplitudeState& state,
                        const ProductBasis& basis) {
  const auto amp = std::conj(q.alpha) * state.c[basis.index(0, 0)] +
                   std::conj(q.beta) * state.c[basis.index(1, 0)];
  return std::min(1.0, std::norm(amp));
}

double stored_occupation(const QubitState& q, const AmplitudeState& state,
                         const ProductBasis& basis) {
  const auto amp = std::conj(q.alpha) * state.c[basis.index(0, 0)] +
                   std::conj(q.beta) * state.c[basis.index(0, 1)];
  return std::min(1.0, std::norm(amp));
}

MemoryResult run_memory(const QubitState& q, const Model& model, const MemorySchedule& ms,
                        const IntegratorOptions& opts, std::size_t window_samples) {
  if (window_samples < 2) throw ConfigError("window_samples must be at least 2");
  std::vector<double> window(window_samples);
  for (std::size_t i = 0; i < window_samples; ++i)
    window[i] = ms.retrieved_at +
                ms.window_ns * static_cast<double>(i) / static_cast<double>(window_samples - 1);
  window.back() = ms.total_ns();
  std::vector<double> extra = window;
  extra.push_back(ms.storage_end);

  MemoryResult r;
  r.schedule_used = ms;
  r.warnings = ms.warnings;
  r.trajectory = propagate(model, protocol_initial_state(q, model, ms), ms.schedule, opts, extra);

  r.trace.reserve(r.trajectory.samples.size());
  for (const auto& smp : r.trajectory.samples)
    r.trace.push_back({smp.state.t, smp.s, fidelity_squared(q, smp.state, model.basis),
                       stored_occupation(q, smp.state, model.basis), smp.state.norm()});

  double sum = 0.0;
  r.f2_min = std::numeric_limits<double>::infinity();
  r.f2_max = -std::numeric_limits<double>::infinity();
  for (double t : window) {
    const double f2 = fidelity_squared(q, r.trajectory.at(t).state, model.basis);
    sum += f2;
    r.f2_min = std::min(r.f2_min, f2);
    r.f2_max = std::max(r.f2_max, f2);
  }
  r.f2_mean = std::clamp(sum / static_cast<double>(window_samples), r.f2_min, r.f2_max);
  const auto& fin = r.trajectory.final_state();
  r.f2_final = fidelity_squared(q, fin, model.basis);
  r.final_norm = fin.norm();
  r.stored_after_storage = stored_occupation(q, r.trajectory.at(ms.storage_end).state, model.basis);
  return r;
}

DetuneResult optimize_detuning(const QubitState& q, const Model& model,
                               const ProtocolOptions& protocol, const DetuneSearch& search,
                               const IntegratorOptions& opts, unsigned workers) {
  if (!(search.lo <= search.hi)) throw ConfigError("empty detuning range");
  if (search.lo < 0.0) throw ConfigError("detuning range must start at s >= 0");
  const double s_star = resonant_bias(model.device).value();
  if (search.hi >= s_star)
    throw ConfigError("detuning range must lie below the resonant bias s* = " +
                      std::to_string(s_star));
  if (search.grid_points < 2 && search.lo != search.hi)
    throw ConfigError("detuning grid needs at least 2 points");
  if (!(search.tolerance > 0.0)) throw ConfigError("detuning tolerance must be positive");

  IntegratorOptions light = opts;
  light.samples = 0;
  auto objective = [&](double s) {
    ProtocolOptions p = protocol;
    p.s_off = s;
    const auto ms = build_memory_schedule(model.device, p);
    return run_memory(q, model, ms, light, p.window_samples).f2_mean;
  };

  DetuneResult out;
  if (search.lo == search.hi) {
    const double f = objective(search.lo);
    out = {search.lo, f, search.lo, f, {{search.lo, f}}};
    return out;
  }

  const std::size_t n = search.grid_points;
  const double step = (search.hi - search.lo) / static_cast<double>(n - 1);
  std::vector<double> grid(n), values(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = search.lo + step * static_cast<double>(i);
  grid.back() = search.hi;
  parallel_for(n, workers, [&](std::size_t i) { values[i] = objective(grid[i]); });

  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.trace.emplace_back(grid[i], values[i]);
    if (values[i] > values[best]) best = i;
  }
  out.grid_best_s = grid[best];
  out.grid_best_f2 = values[best];

  double a = std::max(search.lo, grid[best] - step);
  double b = std::min(search.hi, grid[best] + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  out.trace.emplace_back(x1, f1);
  out.trace.emplace_back(x2, f2);
  while (b - a > search.tolerance) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
      out.trace.emplace_back(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
      out.trace.emplace_back(x2, f2);
    }
  }

  out.s_off = out.grid_best_s;
  out.f2_mean = out.grid_best_f2;
  for (const auto& [s, f] : out.trace) {
    if (f > out.f2_mean || (f == out.f2_mean && s < out.s_off)) {
      out.s_off = s;
      out.f2_mean = f;
    }
  }
  return out;
}

}  // namespace qmem
