#pragma once

// Run configuration: a single JSON object with strict schema validation.
// Unknown keys are rejected; omitted keys take the defaults below, which pin
// the reference device (E_J = 43.05 meV, E_c = 53.33 neV, 15 GHz resonator,
// g = 0.05 hbar omega0).

#include <filesystem>
#include <optional>
#include <string>

#include "qmem/basis.hpp"
#include "qmem/propagator.hpp"
#include "qmem/protocol.hpp"
#include "qmem/sweeps.hpp"

namespace qmem {

struct DeviceConfig {
  double ej_mev = 43.05;
  double ec_nev = 53.33;
  double f0_ghz = 15.0;
  double g_ratio = 0.05;
};

struct QubitConfig {
  double theta = 1.5707963267948966;  ///< Bloch polar angle
  double phi = 0.0;                   ///< Bloch azimuth
};

struct RunConfig {
  DeviceConfig device;
  ProtocolOptions protocol;
  bool include_diagonal_drive = true;
  QubitConfig qubit;
  IntegratorOptions integrator;
  std::size_t m_levels = 5;
  std::size_t n_levels = 5;
  std::optional<SweepSpec> sweep;
  DetuneSearch optimize;
  std::string output_dir = "out";
  unsigned workers = 1;
  std::uint64_t seed = 0;

  /// Validated physical model. Throws ConfigError.
  Model model() const;
  QubitState qubit_state() const;
  /// Re-checks every invariant; throws ConfigError.
  void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Effective configuration with every default filled in.
std::string serialize_config(const RunConfig& cfg);

}  // namespace qmem
