#include "qmem/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/simd/kernels.hpp"

namespace qmem {

AmplitudeState AmplitudeState::zero(std::size_t dim, double t) {
  AmplitudeState st;
  st.c.assign(dim, cplx{});
  st.theta.assign(dim, 0.0);
  st.t = t;
  return st;
}

double AmplitudeState::norm() const {
  double acc = 0.0;
  for (const auto& z : c) acc += std::norm(z);
  return acc;
}

double overlap_squared(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc{};
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) acc += std::conj(a[k]) * b[k];
  return std::norm(acc);
}

void IntegratorOptions::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("integrator tolerances must be positive");
  if (!(max_step > 0.0)) throw ConfigError("max_step must be positive");
  if (fixed_step < 0.0) throw ConfigError("fixed_step must be non-negative");
  if (!(norm_guard > 0.0)) throw ConfigError("norm_guard must be positive");
  if (!(min_step > 0.0)) throw ConfigError("min_step must be positive");
}

FrameMatrices FrameMatrices::build(const Model& model, BiasPoint b) {
  FrameMatrices fm;
  fm.s = b.value();
  fm.energies = qmem::energies(model.basis, model.device, b);
  fm.interaction = interaction_matrix(model.basis, model.device, b, model.options);
  fm.dds = dds_matrix(model.basis, model.device, b);
  return fm;
}

AmplitudeDerivative rhs(const AmplitudeState& state, double sdot, const FrameMatrices& m) {
  const auto& kern = simd::active_kernels();
  const std::size_t dim = state.dim();
  const OperatorMatrix gen = m.interaction.plus_scaled(m.dds, cplx(0.0, -sdot));
  std::vector<cplx> phasor(dim), u(dim), w(dim);
  for (std::size_t k = 0; k < dim; ++k) phasor[k] = std::polar(1.0, state.theta[k]);
  kern.cmul_conj(phasor.data(), state.c.data(), u.data(), dim);
  kern.cmatvec(gen.data().data(), u.data(), w.data(), dim);
  AmplitudeDerivative d;
  d.dc.resize(dim);
  kern.cmul_neg_i(phasor.data(), w.data(), d.dc.data(), dim);
  d.dtheta = m.energies;
  return d;
}

const TrajectorySample& Trajectory::at(double t) const {
  auto it = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const TrajectorySample& s, double v) { return s.state.t < v; });
  if (it == samples.end()) return samples.back();
  if (it != samples.begin() && std::abs(std::prev(it)->state.t - t) < std::abs(it->state.t - t))
    return *std::prev(it);
  return *it;
}

double max_energy_gap(const Model& model, const BiasSchedule& schedule) {
  double s_min = schedule.start_bias();
  for (const auto& seg : schedule.segments()) s_min = std::min({s_min, seg.s_start, seg.s_end});
  const double spacing = level_spacing(model.device, BiasPoint(s_min));
  return static_cast<double>(model.basis.m_levels() - 1) * spacing +
         static_cast<double>(model.basis.n_levels() - 1) * model.device.omega0;
}

std::vector<double> phase_integral(const Model& model, const BiasSchedule& schedule,
                                   double t_from, double t_to) {
  // Composite 5-point Gauss-Legendre on each segment piece.
  static constexpr double nodes[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
  static constexpr double weights[] = {0.2369268850561891, 0.4786286704993665,
                                       0.5688888888888889, 0.4786286704993665,
                                       0.2369268850561891};
  const double sign = t_to >= t_from ? 1.0 : -1.0;
  const double lo = std::min(t_from, t_to), hi = std::max(t_from, t_to);
  const auto bounds = schedule.boundaries();
  double spacing_integral = 0.0;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double a = std::max(lo, bounds[i]), b = std::min(hi, bounds[i + 1]);
    if (b <= a) continue;
    const auto& seg = schedule.segments()[i];
    if (seg.kind == Segment::Kind::hold) {
      spacing_integral += (b - a) * level_spacing(model.device, BiasPoint(seg.s_start));
      continue;
    }
    constexpr int pieces = 64;
    const double h = (b - a) / pieces;
    for (int j = 0; j < pieces; ++j) {
      const double mid = a + (j + 0.5) * h;
      for (int q = 0; q < 5; ++q) {
        const double s = schedule.sample_in(i, mid + 0.5 * h * nodes[q]).s;
        spacing_integral += 0.5 * h * weights[q] * level_spacing(model.device, BiasPoint(s));
      }
    }
  }
  std::vector<double> out(model.basis.dim());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = sign * (static_cast<double>(model.basis.junction_level(k)) * spacing_integral +
                     static_cast<double>(model.basis.phonon_level(k)) * model.device.omega0 *
                         (hi - lo));
  return out;
}

namespace {

enum class Frame { interaction, lab };

// State vector layout: [amplitudes as re/im pairs (2*dim)] [phases (dim)].
class AmplitudeSystem {
 public:
  AmplitudeSystem(const Model& model, const BiasSchedule& schedule, const IntegratorOptions& opts,
                  Frame frame)
      : model_(model),
        schedule_(schedule),
        frame_(frame),
        refresh_(opts.refresh_threshold),
        kern_(simd::active_kernels()),
        dim_(model.basis.dim()),
        gen_(dim_),
        phasor_(dim_),
        u_(dim_),
        w_(dim_),
        energy_(dim_) {}

  std::size_t size() const { return 3 * dim_; }
  std::size_t dim() const { return dim_; }
  void set_segment(std::size_t index) { segment_ = index; }
  std::size_t calls() const { return calls_; }

  void operator()(double t, const double* y, double* dy) {
    ++calls_;
    const BiasSample b = schedule_.sample_in(segment_, t);
    refresh(b.s);
    const auto* amp = reinterpret_cast<const cplx*>(y);
    const double* theta = y + 2 * dim_;
    auto* damp = reinterpret_cast<cplx*>(dy);
    double* dtheta = dy + 2 * dim_;

    const cplx* gen = interaction_.data().data();
    if (b.sdot != 0.0) {
      const double* parts[1] = {reinterpret_cast<const double*>(neg_i_dds_.data().data())};
      const double coef[1] = {b.sdot};
      kern_.lincomb(reinterpret_cast<const double*>(interaction_.data().data()), parts, coef, 1,
                    reinterpret_cast<double*>(gen_.data().data()), 2 * dim_ * dim_);
      gen = gen_.data().data();
    }

    if (frame_ == Frame::interaction) {
      for (std::size_t k = 0; k < dim_; ++k) phasor_[k] = std::polar(1.0, theta[k]);
      kern_.cmul_conj(phasor_.data(), amp, u_.data(), dim_);
      kern_.cmatvec(gen, u_.data(), w_.data(), dim_);
      kern_.cmul_neg_i(phasor_.data(), w_.data(), damp, dim_);
    } else {
      kern_.cmatvec(gen, amp, w_.data(), dim_);
      kern_.diag_add_neg_i(energy_.data(), amp, w_.data(), damp, dim_);
    }
    std::copy(energy_.begin(), energy_.end(), dtheta);
  }

 private:
  void refresh(double s) {
    if (s != energy_s_) {
      const double spacing = level_spacing(model_.device, BiasPoint(s));
      for (std::size_t k = 0; k < dim_; ++k)
        energy_[k] = static_cast<double>(model_.basis.junction_level(k)) * spacing +
                     static_cast<double>(model_.basis.phonon_level(k)) * model_.device.omega0;
      energy_s_ = s;
    }
    if (!(std::abs(s - matrix_s_) <= refresh_)) {
      const BiasPoint b(s);
      interaction_ = interaction_matrix(model_.basis, model_.device, b, model_.options);
      neg_i_dds_ = dds_matrix(model_.basis, model_.device, b);
      for (auto& z : neg_i_dds_.data()) z *= cplx(0.0, -1.0);
      matrix_s_ = s;
    }
  }

  const Model& model_;
  const BiasSchedule& schedule_;
  Frame frame_;
  double refresh_;
  const simd::KernelTable& kern_;
  std::size_t dim_;
  std::size_t segment_ = 0;
  std::size_t calls_ = 0;
  double matrix_s_ = std::numeric_limits<double>::quiet_NaN();
  double energy_s_ = std::numeric_limits<double>::quiet_NaN();
  OperatorMatrix interaction_;
  OperatorMatrix neg_i_dds_;
  OperatorMatrix gen_;
  std::vector<cplx> phasor_, u_, w_;
  std::vector<double> energy_;
};

// Dormand-Prince 5(4) with FSAL and standard step-size control.
class DormandPrince {
 public:
  DormandPrince(std::size_t n, const IntegratorOptions& opts)
      : opts_(opts), kern_(simd::active_kernels()), n_(n), ytmp_(n), yerr_(n), zeros_(n, 0.0) {
    for (auto& k : k_) k.resize(n);
  }

  void invalidate() { fsal_ = false; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

  template <class System>
  void advance(System& f, double& t, double t_target, std::vector<double>& y) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
    static constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
    static constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                    -212.0 / 729};
    static constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                    -5103.0 / 18656};
    static constexpr double b5[] = {35.0 / 384, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                    11.0 / 84};
    static constexpr double e[] = {71.0 / 57600,      -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525,    -1.0 / 40};

    if (h_ <= 0.0) h_ = std::min(opts_.max_step, 1e-3);
    const double dir = t_target >= t ? 1.0 : -1.0;
    std::vector<double> ynew(n_);
    while (t != t_target) {
      if (!fsal_) {
        f(t, y.data(), k_[0].data());
        fsal_ = true;
      }
      const double remaining = t_target - t;
      double h = dir * std::min(h_, opts_.max_step);
      const bool clipped = std::abs(h) >= std::abs(remaining);
      if (clipped) h = remaining;

      const double* y0 = y.data();
      auto stage = [&](std::initializer_list<double> coefs, double tc, std::size_t out) {
        const double* ks[6];
        double cs[6];
        std::size_t j = 0;
        for (double a : coefs) {
          ks[j] = k_[j].data();
          cs[j] = h * a;
          ++j;
        }
        kern_.lincomb(y0, ks, cs, j, ytmp_.data(), n_);
        f(t + tc * h, ytmp_.data(), k_[out].data());
      };
      stage({a21}, c2, 1);
      stage({a3[0], a3[1]}, c3, 2);
      stage({a4[0], a4[1], a4[2]}, c4, 3);
      stage({a5[0], a5[1], a5[2], a5[3]}, c5, 4);
      stage({a6[0], a6[1], a6[2], a6[3], a6[4]}, 1.0, 5);
      {
        const double* ks[5] = {k_[0].data(), k_[2].data(), k_[3].data(), k_[4].data(),
                               k_[5].data()};
        double cs[5];
        for (int j = 0; j < 5; ++j) cs[j] = h * b5[j];
        kern_.lincomb(y0, ks, cs, 5, ynew.data(), n_);
      }
      f(t + h, ynew.data(), k_[6].data());
      {
        const double* ks[6] = {k_[0].data(), k_[2].data(), k_[3].data(),
                               k_[4].data(), k_[5].data(), k_[6].data()};
        double cs[6];
        for (int j = 0; j < 6; ++j) cs[j] = h * e[j];
        kern_.lincomb(zeros_.data(), ks, cs, 6, yerr_.data(), n_);
      }
      const double err = std::sqrt(
          kern_.err_sumsq(yerr_.data(), y0, ynew.data(), opts_.abs_tol, opts_.rel_tol, n_) /
          static_cast<double>(n_));

      if (err <= 1.0 && std::isfinite(err)) {
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        t = clipped ? t_target : t + h;
        y.swap(ynew);
        std::swap(k_[0], k_[6]);
        ++accepted_;
        h_ = clipped ? std::max(h_, std::abs(h) * factor) : std::abs(h) * factor;
      } else {
        ++rejected_;
        const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h_ = std::abs(h) * factor;
        if (h_ < opts_.min_step) {
          std::ostringstream msg;
          msg << "step-size underflow at t = " << t << " ns (h = " << h_ << " ns)";
          throw PropagationError(msg.str());
        }
      }
    }
  }

 private:
  const IntegratorOptions& opts_;
  const simd::KernelTable& kern_;
  std::size_t n_;
  std::vector<double> k_[7];
  std::vector<double> ytmp_, yerr_, zeros_;
  double h_ = 0.0;
  bool fsal_ = false;
  std::size_t accepted_ = 0, rejected_ = 0;
};

// Classical fourth-order Runge-Kutta with a fixed maximal step.
class FixedRk4 {
 public:
  FixedRk4(std::size_t n, double step) : kern_(simd::active_kernels()), n_(n), step_(step), tmp_(n) {
    for (auto& k : k_) k.resize(n);
  }

  void invalidate() {}
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return 0; }

  template <class System>
  void advance(System& f, double& t, double t_target, std::vector<double>& y) {
    const double span = t_target - t;
    if (span == 0.0) return;
    const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / step_ - 1e-9));
    const double h = span / static_cast<double>(std::max<std::size_t>(steps, 1));
    const double t0 = t;
    for (std::size_t i = 0; i < std::max<std::size_t>(steps, 1); ++i) {
      const double ts = t0 + static_cast<double>(i) * h;
      f(ts, y.data(), k_[0].data());
      const double* k1[1] = {k_[0].data()};
      const double half[1] = {0.5 * h};
      kern_.lincomb(y.data(), k1, half, 1, tmp_.data(), n_);
      f(ts + 0.5 * h, tmp_.data(), k_[1].data());
      const double* k2[1] = {k_[1].data()};
      kern_.lincomb(y.data(), k2, half, 1, tmp_.data(), n_);
      f(ts + 0.5 * h, tmp_.data(), k_[2].data());
      const double* k3[1] = {k_[2].data()};
      const double full[1] = {h};
      kern_.lincomb(y.data(), k3, full, 1, tmp_.data(), n_);
      f(ts + h, tmp_.data(), k_[3].data());
      const double* ks[4] = {k_[0].data(), k_[1].data(), k_[2].data(), k_[3].data()};
      const double cs[4] = {h / 6, h / 3, h / 3, h / 6};
      kern_.lincomb(y.data(), ks, cs, 4, tmp_.data(), n_);
      y.swap(tmp_);
      ++accepted_;
    }
    t = t_target;
  }

 private:
  const simd::KernelTable& kern_;
  std::size_t n_;
  double step_;
  std::vector<double> k_[4];
  std::vector<double> tmp_;
  std::size_t accepted_ = 0;
};

std::vector<double> pack(const AmplitudeState& st, Frame frame) {
  const std::size_t dim = st.dim();
  std::vector<double> y(3 * dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const cplx a = frame == Frame::interaction ? st.c[k] : st.c[k] * std::polar(1.0, -st.theta[k]);
    y[2 * k] = a.real();
    y[2 * k + 1] = a.imag();
    y[2 * dim + k] = st.theta[k];
  }
  return y;
}

AmplitudeState unpack(const std::vector<double>& y, std::size_t dim, double t, Frame frame) {
  AmplitudeState st = AmplitudeState::zero(dim, t);
  for (std::size_t k = 0; k < dim; ++k) {
    st.theta[k] = y[2 * dim + k];
    const cplx a{y[2 * k], y[2 * k + 1]};
    st.c[k] = frame == Frame::interaction ? a : a * std::polar(1.0, st.theta[k]);
  }
  return st;
}

double packed_norm(const std::vector<double>& y, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < 2 * dim; ++i) acc += y[i] * y[i];
  return acc;
}

void check_initial(const Model& model, const AmplitudeState& st, const BiasSchedule& schedule) {
  if (st.c.size() != model.basis.dim() || st.theta.size() != model.basis.dim())
    throw ConfigError("initial state dimension does not match the basis");
  if (st.t < -1e-12 || st.t > schedule.total_duration() + 1e-12)
    throw ConfigError("initial time lies outside the schedule");
}

std::vector<double> stop_times(const BiasSchedule& schedule, double t0, double t1,
                               std::size_t samples, std::span<const double> extra) {
  std::vector<double> times = schedule.boundaries();
  if (samples >= 2 && t1 > t0) {
    for (std::size_t i = 0; i < samples; ++i)
      times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1));
  }
  times.insert(times.end(), extra.begin(), extra.end());
  std::erase_if(times, [&](double t) { return t < t0 || t > t1; });
  times.push_back(t0);
  times.push_back(t1);
  std::sort(times.begin(), times.end());
  std::vector<double> out;
  for (double t : times)
    if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
  if (out.back() != t1) out.back() = t1;
  return out;
}

// Integrates over the schedule between two times, visiting every stop time.
template <class Stepper, class OnStop>
void drive(AmplitudeSystem& sys, Stepper& stepper, const BiasSchedule& schedule, double t_from,
           double t_to, std::vector<double>& y, const std::vector<double>& stops,
           OnStop&& on_stop) {
  const auto bounds = schedule.boundaries();
  const std::size_t nseg = schedule.segments().size();
  const bool forward = t_to >= t_from;
  double t = t_from;
  std::size_t next_stop = 0;
  auto visit = [&](double at) {
    while (next_stop < stops.size() && std::abs(stops[next_stop] - at) <= 1e-12) {
      on_stop(at, y);
      ++next_stop;
    }
  };
  visit(t);
  for (std::size_t step = 0; step < nseg; ++step) {
    const std::size_t i = forward ? step : nseg - 1 - step;
    const double a = bounds[i], b = bounds[i + 1];
    if (b - a <= 0.0) continue;
    const double seg_from = forward ? std::max(a, t) : std::min(b, t);
    const double seg_to = forward ? std::min(b, t_to) : std::max(a, t_to);
    if (forward ? seg_to <= seg_from : seg_to >= seg_from) continue;
    sys.set_segment(i);
    stepper.invalidate();
    while (next_stop < stops.size() &&
           (forward ? stops[next_stop] <= seg_to + 1e-12 : stops[next_stop] >= seg_to - 1e-12)) {
      const double target = stops[next_stop];
      stepper.advance(sys, t, target, y);
      visit(target);
    }
    if (t != seg_to) stepper.advance(sys, t, seg_to, y);
  }
}

template <class OnStop>
std::pair<std::size_t, std::size_t> integrate(AmplitudeSystem& sys, const Model& model,
                                              const BiasSchedule& schedule,
                                              const IntegratorOptions& opts, double t_from,
                                              double t_to, std::vector<double>& y,
                                              const std::vector<double>& stops, OnStop&& on_stop) {
  if (opts.method == Method::adaptive_rk45) {
    DormandPrince stepper(sys.size(), opts);
    drive(sys, stepper, schedule, t_from, t_to, y, stops, on_stop);
    return {stepper.accepted(), stepper.rejected()};
  }
  const double limit = 0.1 / max_energy_gap(model, schedule);
  double step = opts.fixed_step;
  if (step == 0.0) step = 0.5 * limit;
  if (step >= limit) {
    std::ostringstream msg;
    msg << "fixed_step " << step << " ns does not resolve the fastest phase (need < " << limit
        << " ns)";
    throw ConfigError(msg.str());
  }
  FixedRk4 stepper(sys.size(), step);
  drive(sys, stepper, schedule, t_from, t_to, y, stops, on_stop);
  return {stepper.accepted(), stepper.rejected()};
}

Trajectory run_forward(const Model& model, const AmplitudeState& initial,
                       const BiasSchedule& schedule, const IntegratorOptions& opts,
                       std::span<const double> extra_times, Frame frame) {
  opts.validate();
  check_initial(model, initial, schedule);
  const std::size_t dim = model.basis.dim();
  const double t_end = schedule.total_duration();
  Trajectory traj;
  if (schedule.empty() || t_end - initial.t <= 0.0) {
    traj.samples.push_back({initial, schedule.empty() ? 0.0 : schedule.sample(initial.t).s});
    return traj;
  }
  const double norm0 = initial.norm();
  const auto stops = stop_times(schedule, initial.t, t_end, opts.samples, extra_times);
  traj.samples.reserve(stops.size());
  AmplitudeSystem sys(model, schedule, opts, frame);
  std::vector<double> y = pack(initial, frame);
  auto on_stop = [&](double t, const std::vector<double>& state) {
    const double drift = std::abs(packed_norm(state, dim) - norm0);
    if (drift > opts.norm_guard) {
      std::ostringstream msg;
      msg << "norm drift " << drift << " exceeds " << opts.norm_guard << " at t = " << t << " ns";
      throw PropagationError(msg.str());
    }
    traj.samples.push_back({unpack(state, dim, t, frame), schedule.sample(t).s});
  };
  const auto [acc, rej] = integrate(sys, model, schedule, opts, initial.t, t_end, y, stops, on_stop);
  traj.accepted_steps = acc;
  traj.rejected_steps = rej;
  traj.rhs_calls = sys.calls();
  return traj;
}

}  // namespace

Trajectory propagate(const Model& model, const AmplitudeState& initial,
                     const BiasSchedule& schedule, const IntegratorOptions& opts,
                     std::span<const double> extra_times) {
  return run_forward(model, initial, schedule, opts, extra_times, Frame::interaction);
}

Trajectory propagate_lab_frame(const Model& model, const AmplitudeState& initial,
                               const BiasSchedule& schedule, const IntegratorOptions& opts,
                               std::span<const double> extra_times) {
  return run_forward(model, initial, schedule, opts, extra_times, Frame::lab);
}

AmplitudeState propagate_backward(const Model& model, const AmplitudeState& final,
                                  const BiasSchedule& schedule, const IntegratorOptions& opts) {
  opts.validate();
  check_initial(model, final, schedule);
  if (schedule.empty() || final.t <= 0.0) return final;
  const std::size_t dim = model.basis.dim();
  AmplitudeSystem sys(model, schedule, opts, Frame::interaction);
  std::vector<double> y = pack(final, Frame::interaction);
  const std::vector<double> stops{final.t, 0.0};
  const double norm0 = final.norm();
  integrate(sys, model, schedule, opts, final.t, 0.0, y, stops, [](double, const auto&) {});
  AmplitudeState out = unpack(y, dim, 0.0, Frame::interaction);
  if (std::abs(out.norm() - norm0) > opts.norm_guard)
    throw PropagationError("norm drift during backward propagation");
  return out;
}

}  // namespace qmem
