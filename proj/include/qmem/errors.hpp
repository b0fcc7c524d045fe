#pragma once

#include <stdexcept>
#include <string>

namespace qmem {

/// Invalid user-supplied configuration or out-of-domain physical input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The resonator frequency exceeds the junction plasma frequency, so no bias
/// tunes the junction into resonance.
class ResonanceUnreachable : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Numerical failure during time integration (step underflow, norm drift).
class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmem
