#pragma once

// CSV and JSON writers. All numbers go through std::to_chars, so output does
// not depend on the process locale.

#include <ostream>
#include <string>
#include <vector>

#include "qmem/config.hpp"
#include "qmem/rwa.hpp"

namespace qmem {

/// Shortest round-trip representation.
std::string format_number(double x);
/// Scientific notation with 12 significant digits.
std::string format_scientific(double x);

/// Closed-form resonant amplitudes at time t of the memory protocol, with
/// resonance treated as instantaneous at the schedule landmarks.
RwaAmplitudes rwa_overlay(const QubitState& q, const MemorySchedule& schedule, double t);

struct RunInfo {
  std::string command;
  double wall_clock_s = 0.0;
  std::string kernels;
};

void write_trajectory_csv(std::ostream& out, const MemoryResult& result, const Model& model,
                          const QubitState& q, bool with_oracle);
std::string memory_result_json(const MemoryResult& result, const RunConfig& cfg,
                               const RunInfo& info);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows, const SweepSpec& spec,
                       const RunConfig& cfg, const RunInfo& info);

std::string detune_json(const DetuneResult& result, const RunConfig& cfg, const RunInfo& info);

}  // namespace qmem
