#include <doctest.h>

#include <cmath>

#include "qmem/errors.hpp"
#include "qmem/protocol.hpp"
#include "qmem/units.hpp"

using namespace qmem;

namespace {

Model reference_model(double g = 0.05) {
  Model model;
  model.device = DeviceParams::from_lab_units(43.05, 53.33, 15.0, g);
  return model;
}

IntegratorOptions quick() {
  IntegratorOptions o;
  o.samples = 0;
  return o;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("Bloch parametrisation") {
  const auto q = QubitState::from_bloch(units::kPi / 2, 0.0);
  CHECK(q.alpha.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(q.beta.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  const auto r = QubitState::from_bloch(1.2, 2.5);
  CHECK(r.bloch_theta() == doctest::Approx(1.2));
  CHECK(r.bloch_phi() == doctest::Approx(2.5));
  CHECK_THROWS_AS(QubitState::from_amplitudes(1.0, 1.0), ConfigError);
}

TEST_CASE("initial amplitudes") {
  const ProductBasis b(5, 5);
  const auto g = initial_amplitudes(QubitState::from_bloch(0.0, 0.0), b);
  CHECK(std::abs(g.c[b.index(0, 0)]) == doctest::Approx(1.0));
  CHECK(g.norm() == doctest::Approx(1.0));
  const auto e = initial_amplitudes(QubitState::from_bloch(units::kPi, 0.0), b);
  CHECK(std::abs(e.c[b.index(1, 0)]) == doctest::Approx(1.0));
  CHECK(std::abs(e.c[b.index(0, 0)]) < 1e-15);
  const auto x = initial_amplitudes(QubitState::equator_x(), b);
  CHECK(x.c[b.index(0, 0)].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(x.c[b.index(1, 0)].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("schedule landmarks") {
  const auto p = reference_model().device;
  const auto ms = build_memory_schedule(p, ProtocolOptions{});
  CHECK(ms.resonant_dwell_ns() == doctest::Approx(45.474862242732537).epsilon(1e-12));
  CHECK(ms.schedule.segments().size() == 9);
  CHECK(ms.warnings.empty());
  CHECK(ms.schedule.sample(ms.storage_start + 1.0).s == doctest::Approx(ms.s_star));
  CHECK(ms.schedule.sample(0.5 * (ms.storage_end + ms.retrieval_start)).s == doctest::Approx(ms.s_off));
  CHECK(ms.retrieved_at == doctest::Approx(ms.total_ns() - ms.window_ns));
}

TEST_CASE("schedule preconditions") {
  const auto p = reference_model().device;
  const double s_star = resonant_bias(p).value();
  try {
    build_memory_schedule(p.with_g_ratio(0.0), ProtocolOptions{});
    FAIL("zero coupling accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "zero coupling: Rabi frequency undefined");
  }
  CHECK_THROWS_AS(build_memory_schedule(p, BiasPoint(s_star), 1.0, 5.0), ConfigError);
  CHECK_THROWS_AS(build_memory_schedule(p, BiasPoint(0.4), -1.0, 5.0), ConfigError);
  const auto sudden = build_memory_schedule(p, BiasPoint(0.4), 0.0, 5.0);
  CHECK(sudden.warnings.size() == 1);
}

TEST_CASE("fidelity definition") {
  const ProductBasis b(5, 5);
  const auto q = QubitState::from_bloch(1.0, 0.4);
  auto st = AmplitudeState::zero(b.dim());
  st.c[b.index(0, 0)] = q.alpha;
  st.c[b.index(1, 0)] = q.beta;
  CHECK(fidelity_squared(q, st, b) == doctest::Approx(1.0));
  auto other = AmplitudeState::zero(b.dim());
  other.c[b.index(1, 0)] = 1.0;
  CHECK(fidelity_squared(QubitState::from_bloch(0.0, 0.0), other, b) == doctest::Approx(0.0));
  // a global phase on both sides leaves F^2 unchanged
  const std::complex<double> g = std::polar(1.0, 0.83);
  const auto qg = QubitState::from_amplitudes(q.alpha * g, q.beta * g);
  auto sg = st;
  for (auto& c : sg.c) c *= g;
  CHECK(fidelity_squared(qg, sg, b) == doctest::Approx(1.0));
  auto half = st;
  half.c[b.index(1, 0)] = 0.0;
  half.c[b.index(0, 1)] = q.beta;
  CHECK(stored_occupation(q, half, b) == doctest::Approx(1.0));
}

TEST_CASE("ground state is protected") {
  const Model model = reference_model();
  const auto ms = build_memory_schedule(model.device, ProtocolOptions{});
  const auto r = run_memory(QubitState::from_bloch(0.0, 0.0), model, ms, quick());
  CHECK(r.f2_mean > 0.99);
  CHECK(std::abs(r.final_norm - 1.0) < 1e-8);
}

TEST_CASE("equator state round trip") {
  const Model model = reference_model();
  const auto ms = build_memory_schedule(model.device, ProtocolOptions{});
  const auto r = run_memory(QubitState::equator_x(), model, ms, quick());
  CHECK(r.stored_after_storage > 0.95);
  CHECK(r.f2_min <= r.f2_mean);
  CHECK(r.f2_mean <= r.f2_max);
  CHECK(r.trace.front().t == 0.0);
  CHECK(r.trace.back().t == doctest::Approx(ms.total_ns()));
}

TEST_CASE("weak coupling with slow ramps is nearly perfect") {
  const Model model = reference_model(0.005);
  ProtocolOptions p;
  p.ramp_ns *= 10.0;
  p.store_hold_ns = phase_matched_hold(model, p, 5.0);
  const auto ms = build_memory_schedule(model.device, p);
  const auto r = run_memory(QubitState::equator_x(), model, ms, quick());
  CHECK(r.f2_mean > 0.99);
}

TEST_CASE("phase-matched hold cancels the detuned phase") {
  const Model model = reference_model();
  ProtocolOptions p;
  const double h = phase_matched_hold(model, p, 3.0);
  const double rate = level_spacing(model.device, BiasPoint(p.s_off)) - model.device.omega0;
  CHECK(h >= 3.0);
  CHECK(h < 3.0 + units::kTwoPi / rate);
  p.store_hold_ns = h;
  const auto ms = build_memory_schedule(model.device, p);
  const auto ph = phase_integral(model, ms.schedule, ms.storage_end, ms.retrieval_start);
  const double chi = ph[model.basis.index(1, 0)] - ph[model.basis.index(0, 1)];
  CHECK(std::abs(std::remainder(chi, units::kTwoPi)) < 1e-9);
}

TEST_CASE("optimizer on a zero-width range returns that point") {
  const Model model = reference_model();
  DetuneSearch s;
  s.lo = s.hi = 0.41;
  const auto r = optimize_detuning(QubitState::equator_x(), model, ProtocolOptions{}, s, quick());
  CHECK(r.s_off == doctest::Approx(0.41));
}

TEST_CASE("refinement never loses against the grid") {
  const Model model = reference_model(0.005);
  DetuneSearch s;
  s.grid_points = 5;
  s.lo = 0.38;
  s.hi = 0.46;
  const auto r = optimize_detuning(QubitState::equator_x(), model, ProtocolOptions{}, s, quick(), 2);
  CHECK(r.f2_mean >= r.grid_best_f2);
  CHECK(r.s_off >= s.lo);
  CHECK(r.s_off <= s.hi);
  CHECK(r.trace.size() > 5);
}

TEST_CASE("optimizer range checks") {
  const Model model = reference_model();
  DetuneSearch s;
  s.hi = 0.6;  // straddles s*
  CHECK_THROWS_AS(optimize_detuning(QubitState::equator_x(), model, ProtocolOptions{}, s, quick()),
                  ConfigError);
  s.lo = 0.45;
  s.hi = 0.40;
  CHECK_THROWS_AS(optimize_detuning(QubitState::equator_x(), model, ProtocolOptions{}, s, quick()),
                  ConfigError);
}

}
