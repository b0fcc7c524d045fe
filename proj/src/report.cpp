#include "qmem/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "qmem/units.hpp"

namespace qmem {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

ordered_json run_header(const RunConfig& cfg, const RunInfo& info) {
  ordered_json j;
  j["version"] = QMEM_VERSION;
  j["command"] = info.command;
  j["kernels"] = info.kernels;
  j["wall_clock_s"] = info.wall_clock_s;
  j["config"] = ordered_json::parse(serialize_config(cfg));
  return j;
}

ordered_json schedule_json(const MemorySchedule& ms) {
  ordered_json j;
  j["s_star"] = ms.s_star;
  j["s_off"] = ms.s_off;
  j["omega_rabi_rad_per_ns"] = ms.omega_rabi;
  j["storage_start_ns"] = ms.storage_start;
  j["storage_end_ns"] = ms.storage_end;
  j["retrieval_start_ns"] = ms.retrieval_start;
  j["retrieval_end_ns"] = ms.retrieval_end;
  j["retrieved_at_ns"] = ms.retrieved_at;
  j["window_ns"] = ms.window_ns;
  j["total_ns"] = ms.total_ns();
  ordered_json segs = ordered_json::array();
  for (const auto& seg : ms.schedule.segments()) {
    segs.push_back({{"kind", seg.kind == Segment::Kind::hold ? "hold" : "ramp"},
                    {"duration_ns", seg.duration},
                    {"s_start", seg.s_start},
                    {"s_end", seg.s_end},
                    {"shape", to_string(seg.shape)}});
  }
  j["segments"] = segs;
  return j;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_scientific(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 11);
  return std::string(buf, res.ptr);
}

RwaAmplitudes rwa_overlay(const QubitState& q, const MemorySchedule& ms, double t) {
  const double omega = ms.omega_rabi;
  if (t <= ms.storage_end) return rwa_storage(q, omega, std::max(0.0, t - ms.storage_start));
  const RwaAmplitudes stored = rwa_storage(q, omega, ms.storage_end - ms.storage_start);
  if (t <= ms.retrieval_start) return stored;
  const double dt = std::min(t, ms.retrieval_end) - ms.retrieval_start;
  return rwa_retrieval(stored, omega, dt);
}

void write_trajectory_csv(std::ostream& out, const MemoryResult& result, const Model& model,
                          const QubitState& q, bool with_oracle) {
  const auto& basis = model.basis;
  out << "t_ns,s,f2,stored_occupation,norm";
  for (std::size_t m = 0; m < basis.m_levels(); ++m)
    for (std::size_t n = 0; n < basis.n_levels(); ++n)
      out << ",p_" << m << '_' << n << ",arg_" << m << '_' << n;
  if (with_oracle) out << ",rwa_c00_abs2,rwa_c01_abs2,rwa_c10_abs2";
  out << '\n';
  for (const auto& sample : result.trajectory.samples) {
    const auto& st = sample.state;
    out << format_number(st.t) << ',' << format_number(sample.s) << ','
        << format_number(fidelity_squared(q, st, basis)) << ','
        << format_number(stored_occupation(q, st, basis)) << ',' << format_number(st.norm());
    for (std::size_t k = 0; k < basis.dim(); ++k)
      out << ',' << format_number(std::norm(st.c[k])) << ',' << format_number(std::arg(st.c[k]));
    if (with_oracle) {
      const auto r = rwa_overlay(q, result.schedule_used, st.t);
      out << ',' << format_number(std::norm(r.c00)) << ',' << format_number(std::norm(r.c01))
          << ',' << format_number(std::norm(r.c10));
    }
    out << '\n';
  }
}

std::string memory_result_json(const MemoryResult& result, const RunConfig& cfg,
                               const RunInfo& info) {
  ordered_json j = run_header(cfg, info);
  ordered_json r;
  r["f2_mean"] = result.f2_mean;
  r["f2_min"] = result.f2_min;
  r["f2_max"] = result.f2_max;
  r["f2_final"] = result.f2_final;
  r["stored_after_storage"] = result.stored_after_storage;
  r["final_norm"] = result.final_norm;
  r["resonant_dwell_ns"] = result.resonant_dwell_ns();
  r["protocol_ns"] = result.protocol_ns();
  r["total_ns"] = result.total_ns();
  r["gate_time_ns"] = gate_time_ns(cfg.model().device);
  r["accepted_steps"] = result.trajectory.accepted_steps;
  r["rejected_steps"] = result.trajectory.rejected_steps;
  r["rhs_calls"] = result.trajectory.rhs_calls;
  r["warnings"] = result.warnings;
  ordered_json trace = ordered_json::array();
  for (const auto& p : result.trace)
    trace.push_back({{"t_ns", p.t}, {"s", p.s}, {"f2", p.f2}, {"stored", p.stored}, {"norm", p.norm}});
  r["trace"] = trace;
  j["result"] = r;
  j["schedule"] = schedule_json(result.schedule_used);
  return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "parameter,f2_mean,f2_min,f2_max,gate_time_ns,s_off,error\n";
  for (const auto& row : rows) {
    out << format_scientific(row.parameter) << ',' << format_scientific(row.f2_mean) << ','
        << format_scientific(row.f2_min) << ',' << format_scientific(row.f2_max) << ','
        << format_scientific(row.gate_time_ns) << ',' << format_scientific(row.s_off) << ',';
    if (!row.error.empty()) {
      std::string quoted = "\"";
      for (char c : row.error) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
      out << quoted << '"';
    }
    out << '\n';
  }
}

std::string sweep_json(const std::vector<SweepRow>& rows, const SweepSpec& spec,
                       const RunConfig& cfg, const RunInfo& info) {
  ordered_json j = run_header(cfg, info);
  j["kind"] = to_string(spec.kind);
  j["detuning_policy"] = to_string(spec.policy);
  ordered_json arr = ordered_json::array();
  std::vector<double> x, y;
  for (const auto& row : rows) {
    arr.push_back({{"parameter", row.parameter},
                   {"f2_mean", number_or_null(row.f2_mean)},
                   {"f2_min", number_or_null(row.f2_min)},
                   {"f2_max", number_or_null(row.f2_max)},
                   {"gate_time_ns", number_or_null(row.gate_time_ns)},
                   {"s_off", number_or_null(row.s_off)},
                   {"error", row.error}});
    if (row.ok()) {
      x.push_back(row.parameter);
      y.push_back(row.f2_mean);
    }
  }
  j["rows"] = arr;
  j["f2_slope"] = x.size() >= 2 ? number_or_null(regression_slope(x, y)) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string detune_json(const DetuneResult& result, const RunConfig& cfg, const RunInfo& info) {
  ordered_json j = run_header(cfg, info);
  ordered_json r;
  r["s_off"] = result.s_off;
  r["f2_mean"] = result.f2_mean;
  r["grid_best_s"] = result.grid_best_s;
  r["grid_best_f2"] = result.grid_best_f2;
  ordered_json trace = ordered_json::array();
  for (const auto& [s, f] : result.trace) trace.push_back({{"s_off", s}, {"f2_mean", f}});
  r["trace"] = trace;
  j["result"] = r;
  return j.dump(2) + "\n";
}

}  // namespace qmem
