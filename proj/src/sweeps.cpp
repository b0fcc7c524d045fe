#include "qmem/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "qmem/errors.hpp"
#include "qmem/parallel.hpp"
#include "qmem/units.hpp"

namespace qmem {

SweepSpec SweepSpec::defaults(Kind kind) {
  SweepSpec spec;
  spec.kind = kind;
  switch (kind) {
    case Kind::coupling:
      for (int i = 0; i < 10; ++i)
        spec.grid.push_back(0.01 * std::pow(10.0, static_cast<double>(i) / 9.0));
      spec.grid.back() = 0.10;
      break;
    case Kind::bloch_meridian:
      for (int i = 0; i < 25; ++i) spec.grid.push_back(units::kPi * i / 24.0);
      break;
    case Kind::bloch_equator:
      for (int i = 0; i < 25; ++i) spec.grid.push_back(units::kTwoPi * i / 25.0);
      break;
  }
  return spec;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  for (double v : grid)
    if (!std::isfinite(v)) throw ConfigError("sweep grid contains a non-finite value");
  if (kind == Kind::coupling) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) throw ConfigError("coupling grid values must be positive");
      if (i > 0 && !(grid[i] > grid[i - 1]))
        throw ConfigError("coupling grid must be strictly increasing");
    }
  }
  if (kind == Kind::bloch_meridian)
    for (double v : grid)
      if (v < 0.0 || v > units::kPi) throw ConfigError("meridian grid must lie in [0, pi]");
}

std::string to_string(SweepSpec::Kind kind) {
  switch (kind) {
    case SweepSpec::Kind::coupling: return "coupling";
    case SweepSpec::Kind::bloch_meridian: return "bloch_meridian";
    case SweepSpec::Kind::bloch_equator: return "bloch_equator";
  }
  return "coupling";
}

SweepSpec::Kind sweep_kind_from_string(const std::string& name) {
  if (name == "coupling") return SweepSpec::Kind::coupling;
  if (name == "bloch_meridian") return SweepSpec::Kind::bloch_meridian;
  if (name == "bloch_equator") return SweepSpec::Kind::bloch_equator;
  throw ConfigError("unknown sweep kind '" + name + "'");
}

std::string to_string(SweepSpec::DetuningPolicy policy) {
  return policy == SweepSpec::DetuningPolicy::fixed ? "fixed" : "reoptimized";
}

SweepSpec::DetuningPolicy detuning_policy_from_string(const std::string& name) {
  if (name == "fixed") return SweepSpec::DetuningPolicy::fixed;
  if (name == "reoptimized") return SweepSpec::DetuningPolicy::reoptimized;
  throw ConfigError("unknown detuning policy '" + name + "'");
}

double gate_time_ns(const DeviceParams& p) {
  return 4.0 * units::kPi / rabi_frequency(p, resonant_bias(p));
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

namespace {

SweepRow evaluate_point(double parameter, const Model& model, const ProtocolOptions& protocol,
                        const QubitState& q, const IntegratorOptions& opts,
                        const SweepSpec& spec) {
  SweepRow row;
  row.parameter = parameter;
  row.s_off = protocol.s_off;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    row.gate_time_ns = gate_time_ns(model.device);
    ProtocolOptions p = protocol;
    if (spec.policy == SweepSpec::DetuningPolicy::reoptimized) {
      p.s_off = optimize_detuning(q, model, protocol, spec.search, opts, 1).s_off;
      row.s_off = p.s_off;
    }
    IntegratorOptions light = opts;
    light.samples = 0;
    const auto r = run_memory(q, model, build_memory_schedule(model.device, p), light,
                              p.window_samples);
    row.f2_mean = r.f2_mean;
    row.f2_min = r.f2_min;
    row.f2_max = r.f2_max;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.f2_mean = row.f2_min = row.f2_max = nan;
    if (!(row.gate_time_ns > 0.0)) row.gate_time_ns = nan;
  }
  return row;
}

template <class PointFn>
std::vector<SweepRow> run_grid(const SweepSpec& spec, unsigned workers,
                               const SweepProgress& progress, PointFn&& point) {
  spec.validate();
  std::vector<SweepRow> rows(spec.grid.size());
  std::atomic<std::size_t> done{0};
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    rows[i] = point(spec.grid[i]);
    const std::size_t n = done.fetch_add(1) + 1;
    if (progress) progress(n, rows.size());
  });
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep_coupling(const SweepSpec& spec, const Model& model,
                                     const ProtocolOptions& protocol, const QubitState& q,
                                     const IntegratorOptions& opts, unsigned workers,
                                     const SweepProgress& progress) {
  if (spec.kind != SweepSpec::Kind::coupling) throw ConfigError("not a coupling sweep");
  return run_grid(spec, workers, progress, [&](double g_ratio) {
    Model m = model;
    try {
      m.device = model.device.with_g_ratio(g_ratio);
    } catch (const std::exception& e) {
      SweepRow row;
      row.parameter = g_ratio;
      row.error = e.what();
      return row;
    }
    return evaluate_point(g_ratio, m, protocol, q, opts, spec);
  });
}

std::vector<SweepRow> sweep_bloch(const SweepSpec& spec, const Model& model,
                                  const ProtocolOptions& protocol, const IntegratorOptions& opts,
                                  unsigned workers, const SweepProgress& progress) {
  if (spec.kind == SweepSpec::Kind::coupling) throw ConfigError("not a Bloch-sphere sweep");
  const bool meridian = spec.kind == SweepSpec::Kind::bloch_meridian;
  return run_grid(spec, workers, progress, [&](double angle) {
    const QubitState q = meridian ? QubitState::from_bloch(angle, 0.0)
                                  : QubitState::from_bloch(units::kPi / 2, angle);
    return evaluate_point(angle, model, protocol, q, opts, spec);
  });
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Model& model,
                                const ProtocolOptions& protocol, const QubitState& q,
                                const IntegratorOptions& opts, unsigned workers,
                                const SweepProgress& progress) {
  if (spec.kind == SweepSpec::Kind::coupling)
    return sweep_coupling(spec, model, protocol, q, opts, workers, progress);
  return sweep_bloch(spec, model, protocol, opts, workers, progress);
}

}  // namespace qmem
