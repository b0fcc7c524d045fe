#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "qmem/cli.hpp"
#include "qmem/config.hpp"
#include "qmem/errors.hpp"
#include "qmem/report.hpp"

using namespace qmem;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qmem_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qmem");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults round-trip through serialization") {
  const RunConfig a;
  const std::string text = serialize_config(a);
  const RunConfig b = parse_config(text);
  CHECK(serialize_config(b) == text);
}

TEST_CASE("explicit values round-trip") {
  const std::string text = R"({
    "device": {"ej_mev": 40.0, "ec_nev": 50.0, "f0_ghz": 14.5, "g_ratio": 0.031},
    "protocol": {"s_off": 0.39, "ramp_ns": 1.5, "ramp_shape": "linear",
                 "include_diagonal_drive": false, "qubit": {"theta": 0.3, "phi": 1.1}},
    "integrator": {"method": "fixed-rk4", "fixed_step_ns": 1e-4},
    "basis": {"m_levels": 6, "n_levels": 4},
    "sweep": {"kind": "coupling", "grid": {"from": 0.01, "to": 0.1, "points": 4, "spacing": "log"}},
    "workers": 3, "seed": 42
  })";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.device.g_ratio == 0.031);
  CHECK(cfg.protocol.ramp_shape == RampShape::linear);
  CHECK_FALSE(cfg.include_diagonal_drive);
  CHECK(cfg.integrator.method == Method::fixed_rk4);
  CHECK(cfg.m_levels == 6);
  REQUIRE(cfg.sweep);
  REQUIRE(cfg.sweep->grid.size() == 4);
  CHECK(cfg.sweep->grid[3] == 0.1);
  CHECK(cfg.sweep->grid[1] == doctest::Approx(0.01 * std::pow(10.0, 1.0 / 3.0)));
  const std::string once = serialize_config(cfg);
  CHECK(serialize_config(parse_config(once)) == once);
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_AS(parse_config(R"({"devices": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"device": {"ej": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"device": {"ej_mev": "big"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"basis": {"m_levels": -2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"device": {"f0_ghz": 20.0}})"), ResonanceUnreachable);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"kind": "coupling", "grid": []}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"protocol": {"ramp_shape": "cubic"}})"), ConfigError);
}

}

TEST_SUITE("cli") {

TEST_CASE("simulate writes trajectory and result") {
  const auto dir = scratch("simulate");
  const auto cfg = write_config(dir, R"({"integrator": {"samples": 50}})");
  const auto r = cli({"simulate", "--config", cfg.string(), "--out", (dir / "out").string(),
                      "--oracle", "--dump-matrices"});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "result.json"));
  CHECK(fs::exists(dir / "out" / "matrices.txt"));
  std::ifstream csv(dir / "out" / "trajectory.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("t_ns,s,f2,stored_occupation,norm,p_0_0,arg_0_0", 0) == 0);
  CHECK(header.find("rwa_c00_abs2,rwa_c01_abs2,rwa_c10_abs2") != std::string::npos);
}

TEST_CASE("configuration errors exit with 1") {
  const auto dir = scratch("errors");
  auto r = cli({"simulate", "--config", write_config(dir, R"({"device": {"g_ratio": 0.0}})").string(),
                "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("zero coupling: Rabi frequency undefined") != std::string::npos);

  r = cli({"simulate", "--config", write_config(dir, R"({"device": {"f0_ghz": 20.0}})").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("resonance unreachable") != std::string::npos);

  r = cli({"sweep", "--config",
           write_config(dir, R"({"sweep": {"kind": "coupling", "grid": []}})").string()});
  CHECK(r.code == 1);

  r = cli({"optimize-detune", "--config",
           write_config(dir, R"({"optimize": {"range": [0.40, 0.60]}})").string(), "--out",
           dir.string()});
  CHECK(r.code == 1);

  r = cli({"simulate", "--config", (dir / "missing.cfg").string()});
  CHECK(r.code == 1);
  r = cli({"frobnicate"});
  CHECK(r.code == 1);
}

TEST_CASE("single-point detuning range returns that point") {
  const auto dir = scratch("optimize");
  const auto cfg = write_config(dir, R"({"optimize": {"range": [0.41, 0.41]}})");
  const auto r = cli({"optimize-detune", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("s_off 0.41 ") != std::string::npos);
}

TEST_CASE("selftest passes") {
  const auto r = cli({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("number formatting is locale independent and round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_scientific(0.5) == "5.00000000000e-01");
  CHECK(format_number(std::nan("")) == "nan");
}

}

TEST_SUITE("cli") {

TEST_CASE("bundled configurations load") {
  const fs::path dir = fs::path(QMEM_SOURCE_DIR) / "configs";
  for (const char* name : {"fig1.cfg", "fig2.cfg", "fig3_meridian.cfg", "fig3_equator.cfg"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(dir / name));
  }
  const auto fig2 = load_config(dir / "fig2.cfg");
  REQUIRE(fig2.sweep);
  CHECK(fig2.sweep->grid.size() == 10);
  const auto eq = load_config(dir / "fig3_equator.cfg");
  REQUIRE(eq.sweep);
  CHECK(eq.sweep->grid.size() == 25);
  CHECK(eq.sweep->grid.back() < 6.283185307179586);
}

TEST_CASE("bundled single-run configuration lands in the fidelity band") {
  const auto out = scratch("fig1");
  const auto r = cli({"simulate", "--config", (fs::path(QMEM_SOURCE_DIR) / "configs" / "fig1.cfg").string(),
                      "--out", out.string()});
  REQUIRE(r.code == 0);
  std::ifstream f(out / "result.json");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  const auto pos = text.find("\"f2_mean\": ");
  REQUIRE(pos != std::string::npos);
  const double f2 = std::stod(text.substr(pos + 11));
  CHECK(f2 >= 0.91);
  CHECK(f2 <= 0.97);
}

}
