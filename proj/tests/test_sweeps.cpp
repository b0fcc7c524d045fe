#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qmem/errors.hpp"
#include "qmem/report.hpp"
#include "qmem/sweeps.hpp"
#include "qmem/units.hpp"

using namespace qmem;

namespace {

Model reference_model() {
  Model model;
  model.device = DeviceParams::from_lab_units(43.05, 53.33, 15.0, 0.05);
  return model;
}

IntegratorOptions quick() {
  IntegratorOptions o;
  o.samples = 0;
  o.rel_tol = 1e-8;
  return o;
}

std::string as_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_sweep_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_SUITE("sweeps") {

TEST_CASE("default grids") {
  const auto c = SweepSpec::defaults(SweepSpec::Kind::coupling);
  REQUIRE(c.grid.size() == 10);
  CHECK(c.grid.front() == doctest::Approx(0.01));
  CHECK(c.grid.back() == doctest::Approx(0.10));
  CHECK(c.grid[1] / c.grid[0] == doctest::Approx(c.grid[9] / c.grid[8]));
  const auto m = SweepSpec::defaults(SweepSpec::Kind::bloch_meridian);
  REQUIRE(m.grid.size() == 25);
  CHECK(m.grid.back() == doctest::Approx(units::kPi));
  const auto e = SweepSpec::defaults(SweepSpec::Kind::bloch_equator);
  REQUIRE(e.grid.size() == 25);
  CHECK(e.grid.back() < units::kTwoPi);
}

TEST_CASE("sweep definition validation") {
  SweepSpec s;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.grid = {0.02, 0.01};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.grid = {0.01, 0.02};
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS(sweep_kind_from_string("radial"), ConfigError);
  CHECK(sweep_kind_from_string(to_string(SweepSpec::Kind::bloch_equator)) ==
        SweepSpec::Kind::bloch_equator);
}

TEST_CASE("gate time halves when the coupling doubles") {
  const auto p = reference_model().device;
  CHECK(gate_time_ns(p.with_g_ratio(0.1)) ==
        doctest::Approx(0.5 * gate_time_ns(p.with_g_ratio(0.05))).epsilon(1e-14));
  CHECK(gate_time_ns(p) == doctest::Approx(45.474862242732537).epsilon(1e-12));
}

TEST_CASE("regression slope") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 1, 2, 0};
  CHECK(regression_slope(x, y) == doctest::Approx(-0.8));
}

TEST_CASE("results do not depend on the worker count") {
  SweepSpec spec;
  spec.kind = SweepSpec::Kind::coupling;
  spec.grid = {0.04, 0.05, 0.06};
  const auto model = reference_model();
  const auto one = sweep_coupling(spec, model, ProtocolOptions{}, QubitState::equator_x(), quick(), 1);
  const auto three = sweep_coupling(spec, model, ProtocolOptions{}, QubitState::equator_x(), quick(), 3);
  CHECK(as_csv(one) == as_csv(three));
  for (const auto& r : one) CHECK(r.ok());
  CHECK(one[1].gate_time_ns == doctest::Approx(45.474862242732537).epsilon(1e-12));
}

TEST_CASE("equator sweep is 2 pi periodic") {
  SweepSpec a;
  a.kind = SweepSpec::Kind::bloch_equator;
  a.grid = {0.3, 1.7};
  SweepSpec b = a;
  b.grid = {0.3 + units::kTwoPi, 1.7 + units::kTwoPi};
  const auto model = reference_model();
  const auto ra = sweep_bloch(a, model, ProtocolOptions{}, quick());
  const auto rb = sweep_bloch(b, model, ProtocolOptions{}, quick());
  for (std::size_t i = 0; i < 2; ++i) CHECK(ra[i].f2_mean == doctest::Approx(rb[i].f2_mean).epsilon(1e-9));
}

TEST_CASE("failed points are recorded, not fatal") {
  SweepSpec s;
  s.kind = SweepSpec::Kind::coupling;
  s.grid = {0.05, 1e6};  // second point is far outside the weak-coupling regime
  auto model = reference_model();
  IntegratorOptions o = quick();
  o.min_step = 1e-4;
  const auto rows = sweep_coupling(s, model, ProtocolOptions{}, QubitState::equator_x(), o);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok());
  CHECK_FALSE(rows[1].ok());
  CHECK(std::isnan(rows[1].f2_mean));
  const auto csv = as_csv(rows);
  CHECK(csv.rfind("parameter,f2_mean,f2_min,f2_max,gate_time_ns,s_off,error\n", 0) == 0);
}

}
