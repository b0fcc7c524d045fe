#include "qmem/basis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace qmem {

ProductBasis::ProductBasis(std::size_t m_levels, std::size_t n_levels)
    : m_(m_levels), n_(n_levels) {
  if (m_ < 2 || n_ < 2)
    throw ConfigError("basis truncation needs at least 2 junction and 2 phonon levels");
}

double OperatorMatrix::hermiticity_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst;
}

double OperatorMatrix::antisymmetry_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) + (*this)(j, i)));
  return worst;
}

OperatorMatrix OperatorMatrix::plus_scaled(const OperatorMatrix& other, cplx factor) const {
  OperatorMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += factor * other.data_[i];
  return out;
}

std::vector<double> energies(const ProductBasis& basis, const DeviceParams& p, BiasPoint b) {
  const double spacing = level_spacing(p, b);
  std::vector<double> e(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k)
    e[k] = static_cast<double>(basis.junction_level(k)) * spacing +
           static_cast<double>(basis.phonon_level(k)) * p.omega0;
  return e;
}

OperatorMatrix phi_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b,
                          const ModelOptions& opts) {
  const std::size_t m_levels = basis.m_levels();
  const double width = oscillator_length(p, b) / std::numbers::sqrt2;
  const double center = opts.include_diagonal_drive ? std::asin(b.value()) : 0.0;
  OperatorMatrix phi(m_levels);
  for (std::size_t m = 0; m < m_levels; ++m) {
    phi(m, m) = center;
    if (m + 1 < m_levels) {
      const double x = width * std::sqrt(static_cast<double>(m + 1));
      phi(m, m + 1) = x;
      phi(m + 1, m) = x;
    }
  }
  return phi;
}

OperatorMatrix interaction_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b,
                                  const ModelOptions& opts) {
  const OperatorMatrix phi = phi_matrix(basis, p, b, opts);
  const std::size_t m_levels = basis.m_levels();
  const std::size_t n_levels = basis.n_levels();
  OperatorMatrix v(basis.dim());
  // <n|(a - a^dagger)|n'> = sqrt(n') delta_{n,n'-1} - sqrt(n'+1) delta_{n,n'+1}
  for (std::size_t m = 0; m < m_levels; ++m) {
    for (std::size_t mp = 0; mp < m_levels; ++mp) {
      const double phi_mm = phi(m, mp).real();
      if (phi_mm == 0.0) continue;
      const cplx pref = cplx(0.0, -p.g * phi_mm);
      for (std::size_t n = 0; n + 1 < n_levels; ++n) {
        const double lower = std::sqrt(static_cast<double>(n + 1));
        v(basis.index(m, n), basis.index(mp, n + 1)) = pref * lower;
        v(basis.index(m, n + 1), basis.index(mp, n)) = -pref * lower;
      }
    }
  }
  return v;
}

OperatorMatrix dds_junction_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b) {
  const std::size_t m_levels = basis.m_levels();
  const double s = b.value();
  const double width = oscillator_length(p, b);
  // Eigenfunctions are psi_m(phi) = l^{-1/2} h_m((phi - arcsin s)/l).
  // Moving the center gives -(dc/ds)/l * d/dx = -(dc/ds)/(sqrt2 l) (a - a^dagger);
  // stretching the width gives -(dl/ds)/(2l) (a^2 - a^dagger^2).
  const double center_rate = 1.0 / std::sqrt(1.0 - s * s);
  const double one_step = -center_rate / (std::numbers::sqrt2 * width);
  const double two_step = -s / (8.0 * (1.0 - s * s));
  OperatorMatrix d(m_levels);
  for (std::size_t m = 0; m < m_levels; ++m) {
    if (m + 1 < m_levels) {
      const double v = one_step * std::sqrt(static_cast<double>(m + 1));
      d(m, m + 1) = v;
      d(m + 1, m) = -v;
    }
    if (m + 2 < m_levels) {
      const double v = two_step * std::sqrt(static_cast<double>((m + 1) * (m + 2)));
      d(m, m + 2) = v;
      d(m + 2, m) = -v;
    }
  }
  return d;
}

OperatorMatrix dds_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b) {
  const OperatorMatrix dj = dds_junction_matrix(basis, p, b);
  OperatorMatrix d(basis.dim());
  for (std::size_t m = 0; m < basis.m_levels(); ++m)
    for (std::size_t mp = 0; mp < basis.m_levels(); ++mp) {
      if (dj(m, mp) == cplx{}) continue;
      for (std::size_t n = 0; n < basis.n_levels(); ++n)
        d(basis.index(m, n), basis.index(mp, n)) = dj(m, mp);
    }
  return d;
}

namespace {

void dump_matrix(std::ostream& os, const char* name, const ProductBasis& basis,
                 const OperatorMatrix& a) {
  os << "# " << name << " (nonzero entries: m n m' n' re im)\n";
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const cplx z = a(i, j);
      if (z == cplx{}) continue;
      os << basis.junction_level(i) << ' ' << basis.phonon_level(i) << ' '
         << basis.junction_level(j) << ' ' << basis.phonon_level(j) << ' ' << z.real() << ' '
         << z.imag() << '\n';
    }
}

}  // namespace

void dump_matrices(std::ostream& os, const Model& model, BiasPoint b) {
  const auto& basis = model.basis;
  os << std::setprecision(17);
  os << "# bias s = " << b.value() << "\n# energies (m n E rad/ns)\n";
  const auto e = energies(basis, model.device, b);
  for (std::size_t k = 0; k < basis.dim(); ++k)
    os << basis.junction_level(k) << ' ' << basis.phonon_level(k) << ' ' << e[k] << '\n';
  dump_matrix(os, "interaction", basis, interaction_matrix(basis, model.device, b, model.options));
  dump_matrix(os, "d/ds", basis, dds_matrix(basis, model.device, b));
}

}  // namespace qmem
