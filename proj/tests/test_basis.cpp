#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles/hermite_overlap.hpp"
#include "qmem/basis.hpp"
#include "qmem/errors.hpp"

using namespace qmem;

namespace {

Model reference_model(std::size_t m = 5, std::size_t n = 5) {
  Model model;
  model.basis = ProductBasis(m, n);
  model.device = DeviceParams::from_lab_units(43.05, 53.33, 15.0, 0.05);
  return model;
}

}  // namespace

TEST_SUITE("basis") {

TEST_CASE("flat index layout") {
  ProductBasis b(3, 4);
  CHECK(b.dim() == 12);
  for (std::size_t k = 0; k < b.dim(); ++k) CHECK(b.index(b.junction_level(k), b.phonon_level(k)) == k);
  CHECK_THROWS_AS(ProductBasis(1, 5), ConfigError);
  CHECK_THROWS_AS(ProductBasis(5, 1), ConfigError);
}

TEST_CASE("energies are m spacing + n omega0") {
  const auto model = reference_model(4, 3);
  const BiasPoint b(0.3);
  const auto e = energies(model.basis, model.device, b);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double m = model.basis.junction_level(k), n = model.basis.phonon_level(k);
    CHECK(e[k] == doctest::Approx(m * level_spacing(model.device, b) + n * model.device.omega0));
  }
}

TEST_CASE("coupling is hermitian and d/ds antisymmetric at random biases") {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.0, 0.95);
  for (std::size_t m : {2u, 5u, 7u})
    for (int trial = 0; trial < 20; ++trial) {
      const auto model = reference_model(m, 6);
      const BiasPoint b(u(rng));
      CHECK(interaction_matrix(model.basis, model.device, b).hermiticity_error() < 1e-15);
      CHECK(dds_matrix(model.basis, model.device, b).antisymmetry_error() < 1e-15);
    }
}

TEST_CASE("selection rules") {
  const auto model = reference_model(5, 5);
  const BiasPoint b(0.407);
  const auto v = interaction_matrix(model.basis, model.device, b);
  const auto d = dds_matrix(model.basis, model.device, b);
  const auto& B = model.basis;
  for (std::size_t i = 0; i < B.dim(); ++i)
    for (std::size_t j = 0; j < B.dim(); ++j) {
      const long dm = std::labs(long(B.junction_level(i)) - long(B.junction_level(j)));
      const long dn = std::labs(long(B.phonon_level(i)) - long(B.phonon_level(j)));
      if (dn != 1 || dm > 1) CHECK(std::abs(v(i, j)) == 0.0);
      if (dn != 0 || dm == 0 || dm > 2) CHECK(std::abs(d(i, j)) == 0.0);
    }
  // coupling is purely imaginary: -i g phi (a - a^dagger)
  CHECK(v(B.index(1, 0), B.index(0, 1)).real() == 0.0);
  CHECK(v(B.index(1, 0), B.index(0, 1)).imag() < 0.0);
}

TEST_CASE("diagonal drive switch removes only the arcsin(s) term") {
  auto with = reference_model(4, 4);
  auto without = with;
  without.options.include_diagonal_drive = false;
  const BiasPoint b(0.4);
  const auto p1 = phi_matrix(with.basis, with.device, b, with.options);
  const auto p0 = phi_matrix(without.basis, without.device, b, without.options);
  for (std::size_t m = 0; m < 4; ++m) {
    CHECK(p1(m, m).real() == doctest::Approx(std::asin(0.4)));
    CHECK(p0(m, m).real() == 0.0);
    for (std::size_t n = 0; n < 4; ++n)
      if (n != m) CHECK(p1(m, n) == p0(m, n));
  }
}

TEST_CASE("phi elements agree with quadrature") {
  const auto model = reference_model(5, 2);
  const double ratio = model.device.e_c / model.device.e_j;
  for (double s : {0.1, 0.545}) {
    const auto ref = oracle::phi_elements(ratio, s, 5);
    const auto phi = phi_matrix(model.basis, model.device, BiasPoint(s));
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 5; ++n) CHECK(phi(m, n).real() == doctest::Approx(ref[m][n]).epsilon(1e-10));
  }
}

TEST_CASE("d/ds agrees with the finite-difference overlap oracle") {
  const auto model = reference_model(4, 2);
  const double ratio = model.device.e_c / model.device.e_j;
  for (double s : {0.1, 0.407, 0.545, 0.8}) {
    CAPTURE(s);
    const auto ref = oracle::dds(ratio, s, 4);
    const auto d = dds_junction_matrix(model.basis, model.device, BiasPoint(s));
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        CAPTURE(m);
        CAPTURE(n);
        CHECK(std::abs(d(m, n).real() - ref[m][n]) < 1e-6);
        CHECK(d(m, n).imag() == 0.0);
      }
  }
}

TEST_CASE("matrix dump lists every block") {
  const auto model = reference_model(2, 2);
  std::ostringstream os;
  dump_matrices(os, model, BiasPoint(0.4));
  const std::string text = os.str();
  CHECK(text.find("energies") != std::string::npos);
  CHECK(text.find("interaction") != std::string::npos);
  CHECK(text.find("d/ds") != std::string::npos);
}

}
