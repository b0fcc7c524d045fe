#include "qmem/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qmem/config.hpp"
#include "qmem/errors.hpp"
#include "qmem/report.hpp"
#include "qmem/simd/kernels.hpp"

namespace qmem {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  unsigned workers = 0;
  std::string kernels = "auto";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config_path, "JSON run configuration");
  sub->add_option("-o,--out", c.out_dir, "output directory (overrides output_dir)");
  sub->add_option("-j,--workers", c.workers, "worker threads (overrides workers)");
  sub->add_option("--kernels", c.kernels, "scalar, avx2 or auto")
      ->check(CLI::IsMember({"scalar", "avx2", "auto"}));
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (c.workers > 0) cfg.workers = c.workers;
  cfg.validate();
  if (!simd::select_kernels(c.kernels))
    throw ConfigError("kernel table '" + c.kernels + "' is not supported on this CPU");
  return cfg;
}

fs::path prepare(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

template <class Fn>
void with_file(const fs::path& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  fn(f);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_simulate(const Common& c, bool oracle, bool dump, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = resolve(c);
  const Model model = cfg.model();
  const QubitState q = cfg.qubit_state();
  const MemorySchedule ms = build_memory_schedule(model.device, cfg.protocol);
  const MemoryResult result = run_memory(q, model, ms, cfg.integrator, cfg.protocol.window_samples);
  const fs::path dir = prepare(cfg);
  with_file(dir / "trajectory.csv",
            [&](std::ostream& f) { write_trajectory_csv(f, result, model, q, oracle); });
  if (dump) {
    with_file(dir / "matrices.txt", [&](std::ostream& f) {
      f << "# s = s_off\n";
      dump_matrices(f, model, BiasPoint(ms.s_off));
      f << "# s = s_star\n";
      dump_matrices(f, model, BiasPoint(ms.s_star));
    });
  }
  RunInfo info{"simulate", seconds_since(t0), simd::active_kernels().name};
  write_file(dir / "result.json", memory_result_json(result, cfg, info));
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  out << "f2_mean " << format_number(result.f2_mean) << "  f2_min " << format_number(result.f2_min)
      << "  f2_max " << format_number(result.f2_max) << "  protocol_ns "
      << format_number(result.protocol_ns()) << '\n';
  return 0;
}

int cmd_sweep(const Common& c, const std::string& kind_override, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = resolve(c);
  SweepSpec spec = cfg.sweep.value_or(SweepSpec::defaults(SweepSpec::Kind::coupling));
  if (!kind_override.empty()) {
    const auto kind = sweep_kind_from_string(kind_override);
    if (!cfg.sweep || cfg.sweep->kind != kind) spec = SweepSpec::defaults(kind);
  }
  spec.validate();
  cfg.sweep = spec;
  const auto rows = run_sweep(spec, cfg.model(), cfg.protocol, cfg.qubit_state(), cfg.integrator,
                              cfg.workers, [&](std::size_t done, std::size_t total) {
                                out << "sweep " << done << '/' << total << '\n' << std::flush;
                              });
  const fs::path dir = prepare(cfg);
  with_file(dir / "sweep.csv", [&](std::ostream& f) { write_sweep_csv(f, rows); });
  RunInfo info{"sweep", seconds_since(t0), simd::active_kernels().name};
  write_file(dir / "sweep.json", sweep_json(rows, spec, cfg, info));
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.ok();
  if (failed) out << "warning: " << failed << " sweep point(s) failed\n";
  return failed == rows.size() ? 2 : 0;
}

int cmd_optimize(const Common& c, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = resolve(c);
  const auto res = optimize_detuning(cfg.qubit_state(), cfg.model(), cfg.protocol, cfg.optimize,
                                     cfg.integrator, cfg.workers);
  const fs::path dir = prepare(cfg);
  RunInfo info{"optimize-detune", seconds_since(t0), simd::active_kernels().name};
  write_file(dir / "result.json", detune_json(res, cfg, info));
  out << "s_off " << format_number(res.s_off) << "  f2_mean " << format_number(res.f2_mean) << '\n';
  return 0;
}

int cmd_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const char* what, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << what << '\n';
    failures += !ok;
  };
  const simd::KernelTable* avx = simd::avx2_kernels();
  out << "kernels: " << simd::active_kernels().name << (avx ? " (avx2 available)" : "") << '\n';
  Model model;
  model.device = DeviceParams::from_lab_units(43.05, 53.33, 15.0, 0.05);
  const double s_star = resonant_bias(model.device).value();
  check("resonant bias near 0.5455", std::abs(s_star - 0.5455) < 1e-3);
  const auto dv = interaction_matrix(model.basis, model.device, BiasPoint(0.4));
  check("interaction matrix hermitian", dv.hermiticity_error() < 1e-14);
  const auto dd = dds_matrix(model.basis, model.device, BiasPoint(0.4));
  check("d/ds antisymmetric", dd.antisymmetry_error() < 1e-14);
  const auto ms = build_memory_schedule(model.device, ProtocolOptions{});
  IntegratorOptions opts;
  opts.samples = 0;
  const auto r = run_memory(QubitState::from_bloch(0.0, 0.0), model, ms, opts, 8);
  check("ground state preserved", r.f2_mean > 0.99);
  check("norm conserved", std::abs(r.final_norm - 1.0) < 1e-8);
  return failures ? 2 : 0;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qmem: phase-qubit nanomechanical quantum memory simulator"};
  app.set_version_flag("--version", QMEM_VERSION);
  app.require_subcommand(1);

  Common common;
  bool oracle = false, dump = false;
  std::string kind;

  auto* sim = app.add_subcommand("simulate", "single storage/retrieval run");
  add_common(sim, common);
  sim->add_flag("--oracle", oracle, "add closed-form RWA columns to trajectory.csv");
  sim->add_flag("--dump-matrices", dump, "write matrices.txt at s_off and s_star");

  auto* sweep = app.add_subcommand("sweep", "coupling or Bloch-sphere sweep");
  add_common(sweep, common);
  sweep->add_option("--kind", kind, "coupling, bloch_meridian or bloch_equator");

  auto* opt = app.add_subcommand("optimize-detune", "maximise mean fidelity over s_off");
  add_common(opt, common);

  auto* self = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << QMEM_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*sim) return cmd_simulate(common, oracle, dump, out);
    if (*sweep) return cmd_sweep(common, kind, out);
    if (*opt) return cmd_optimize(common, out);
    if (*self) return cmd_selftest(out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const PropagationError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace qmem
