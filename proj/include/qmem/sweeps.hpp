#pragma once

// Parameter studies: memory fidelity and gate time versus coupling, and
// fidelity along Bloch-sphere great circles.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qmem/protocol.hpp"

namespace qmem {

struct SweepSpec {
  enum class Kind { coupling, bloch_meridian, bloch_equator };
  enum class DetuningPolicy { fixed, reoptimized };

  Kind kind = Kind::coupling;
  std::vector<double> grid;
  DetuningPolicy policy = DetuningPolicy::fixed;
  DetuneSearch search;  ///< used when policy == reoptimized

  /// Defaults: 10 log-spaced couplings on [0.01, 0.10], or 25
  /// points on the meridian [0, pi] / equator [0, 2 pi).
  static SweepSpec defaults(Kind kind);
  void validate() const;
};

std::string to_string(SweepSpec::Kind kind);
SweepSpec::Kind sweep_kind_from_string(const std::string& name);
std::string to_string(SweepSpec::DetuningPolicy policy);
SweepSpec::DetuningPolicy detuning_policy_from_string(const std::string& name);

struct SweepRow {
  double parameter = 0.0;
  double f2_mean = 0.0;
  double f2_min = 0.0;
  double f2_max = 0.0;
  double gate_time_ns = 0.0;  ///< 4 pi / Omega
  double s_off = 0.0;
  std::string error;  ///< empty when the point succeeded

  bool ok() const { return error.empty(); }
};

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// One memory run per coupling ratio g/(hbar omega0) in spec.grid.
std::vector<SweepRow> sweep_coupling(const SweepSpec& spec, const Model& model,
                                     const ProtocolOptions& protocol, const QubitState& q,
                                     const IntegratorOptions& opts, unsigned workers = 1,
                                     const SweepProgress& progress = {});

/// One memory run per Bloch angle (theta on the phi = 0 meridian, or phi on
/// the equator).
std::vector<SweepRow> sweep_bloch(const SweepSpec& spec, const Model& model,
                                  const ProtocolOptions& protocol, const IntegratorOptions& opts,
                                  unsigned workers = 1, const SweepProgress& progress = {});

/// Dispatches on spec.kind. `q` is only used by coupling sweeps.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Model& model,
                                const ProtocolOptions& protocol, const QubitState& q,
                                const IntegratorOptions& opts, unsigned workers = 1,
                                const SweepProgress& progress = {});

/// Least-squares slope of y against x.
double regression_slope(std::span<const double> x, std::span<const double> y);

/// 4 pi / Omega at the resonant bias.
double gate_time_ns(const DeviceParams& p);

}  // namespace qmem
