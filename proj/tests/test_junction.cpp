#include <doctest.h>

#include <cmath>

#include "qmem/errors.hpp"
#include "qmem/junction.hpp"
#include "qmem/units.hpp"

using namespace qmem;

namespace {

DeviceParams reference(double g = 0.05) { return DeviceParams::from_lab_units(43.05, 53.33, 15.0, g); }

}  // namespace

TEST_SUITE("junction") {

// Frozen from a 40-digit mpmath evaluation of the same closed forms.
TEST_CASE("reference device values") {
  const auto p = reference();
  CHECK(plasma_frequency(p) == doctest::Approx(102.94887384931268).epsilon(1e-12));
  CHECK(units::rad_per_ns_to_ghz(plasma_frequency(p)) ==
        doctest::Approx(16.384822158862071).epsilon(1e-12));
  const BiasPoint s_star = resonant_bias(p);
  CHECK(s_star.value() == doctest::Approx(0.54550709863200263).epsilon(1e-12));
  CHECK(oscillator_length(p, BiasPoint(0.0)) == doctest::Approx(0.039674102032130727).epsilon(1e-12));
  CHECK(oscillator_length(p, s_star) == doctest::Approx(0.041465064217219757).epsilon(1e-12));
  CHECK(dipole_moment(p, s_star) == doctest::Approx(0.029320228090331752).epsilon(1e-12));
  CHECK(rabi_frequency(p, s_star) == doctest::Approx(0.27633663951048998).epsilon(1e-12));
  CHECK(4.0 * units::kPi / rabi_frequency(p, s_star) ==
        doctest::Approx(45.474862242732537).epsilon(1e-12));
}

TEST_CASE("resonant bias sits where the spacing equals omega0") {
  const auto p = reference();
  const BiasPoint s = resonant_bias(p);
  CHECK(std::abs(s.value() - 0.545) < 1e-3);
  CHECK(level_spacing(p, s) == doctest::Approx(p.omega0).epsilon(1e-14));
}

TEST_CASE("spacing falls and width grows with bias") {
  const auto p = reference();
  double prev_gap = level_spacing(p, BiasPoint(0.0));
  double prev_len = oscillator_length(p, BiasPoint(0.0));
  for (int i = 1; i < 100; ++i) {
    const BiasPoint b(0.95 * i / 99.0);
    const double gap = level_spacing(p, b);
    const double len = oscillator_length(p, b);
    CHECK(gap < prev_gap);
    CHECK(len > prev_len);
    prev_gap = gap;
    prev_len = len;
  }
}

TEST_CASE("unit conversions round-trip") {
  for (double f : {0.1, 1.0, 15.0, 123.456}) {
    CHECK(units::rad_per_ns_to_ghz(units::ghz_to_rad_per_ns(f)) == doctest::Approx(f).epsilon(1e-15));
  }
  const auto p = reference();
  CHECK(p.ej_mev() == doctest::Approx(43.05).epsilon(1e-14));
  CHECK(p.ec_nev() == doctest::Approx(53.33).epsilon(1e-14));
  CHECK(p.f0_ghz() == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(p.g_ratio() == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(p.with_g_ratio(0.02).g_ratio() == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("resonator above the plasma frequency is rejected") {
  CHECK_THROWS_AS(DeviceParams::from_lab_units(43.05, 53.33, 20.0, 0.05), ResonanceUnreachable);
  DeviceParams p = reference();
  p.omega0 = 2.0 * plasma_frequency(p);
  CHECK_THROWS_AS(p.validate(), ResonanceUnreachable);
  CHECK_THROWS_AS(resonant_bias(p), ResonanceUnreachable);
}

TEST_CASE("invalid devices and biases") {
  CHECK_THROWS_AS(DeviceParams::from_lab_units(-1.0, 53.33, 15.0, 0.05), ConfigError);
  CHECK_THROWS_AS(DeviceParams::from_lab_units(43.05, 0.0, 15.0, 0.05), ConfigError);
  CHECK_THROWS_AS(DeviceParams::from_lab_units(43.05, 53.33, 15.0, -0.1), ConfigError);
  // charging energy no longer small against E_J
  CHECK_THROWS_AS(DeviceParams::from_lab_units(1e-3, 53.33e3, 15.0, 0.05), ConfigError);
  CHECK_THROWS_AS(BiasPoint(-0.01), ConfigError);
  CHECK_THROWS_AS(BiasPoint(0.99), ConfigError);
  CHECK_THROWS_AS(BiasPoint(std::nan("")), ConfigError);
  CHECK_NOTHROW(BiasPoint(0.0));
  CHECK_NOTHROW(BiasPoint(0.989));
}

}
