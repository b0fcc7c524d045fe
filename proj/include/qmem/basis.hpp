#pragma once

// Truncated product basis |m>_J (x) |n>_res and the operators of the coupled
// Hamiltonian expressed in the instantaneous harmonic eigenbasis.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "qmem/junction.hpp"

namespace qmem {

using cplx = std::complex<double>;

/// M junction levels times N phonon levels, flat index k = m*N + n.
class ProductBasis {
 public:
  ProductBasis(std::size_t m_levels, std::size_t n_levels);

  std::size_t m_levels() const { return m_; }
  std::size_t n_levels() const { return n_; }
  std::size_t dim() const { return m_ * n_; }

  std::size_t index(std::size_t m, std::size_t n) const { return m * n_ + n; }
  std::size_t junction_level(std::size_t k) const { return k / n_; }
  std::size_t phonon_level(std::size_t k) const { return k % n_; }

  friend bool operator==(const ProductBasis&, const ProductBasis&) = default;

 private:
  std::size_t m_;
  std::size_t n_;
};

/// Dense square complex matrix, row-major. Layout is the contiguous
/// re/im-interleaved array the SIMD kernels consume.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  /// max |A - A^dagger|
  double hermiticity_error() const;
  /// max |A + A^T|
  double antisymmetry_error() const;

  /// this + factor * other
  OperatorMatrix plus_scaled(const OperatorMatrix& other, cplx factor) const;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

struct ModelOptions {
  /// Keep the <m|phi|m> = arcsin(s) displacement term of the coupling.
  bool include_diagonal_drive = true;
};

/// Static description of the simulated system.
struct Model {
  ProductBasis basis{5, 5};
  DeviceParams device;
  ModelOptions options;
};

/// E_mn(s) = m * level_spacing(s) + n * omega0, zero-point terms dropped.
std::vector<double> energies(const ProductBasis& basis, const DeviceParams& p, BiasPoint b);

/// Junction-factor matrix <m|phi|m'> (dimension M), real symmetric.
OperatorMatrix phi_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b,
                          const ModelOptions& opts = {});

/// <mn| -i g (a - a^dagger) phi |m'n'> on the full product basis.
OperatorMatrix interaction_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b,
                                  const ModelOptions& opts = {});

/// Junction-factor matrix <m| d/ds |m'> (dimension M), real antisymmetric.
OperatorMatrix dds_junction_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b);

/// <mn| d/ds |m'n'> = <m|d/ds|m'> delta_{nn'}.
OperatorMatrix dds_matrix(const ProductBasis& basis, const DeviceParams& p, BiasPoint b);

/// Human-readable dump of energies, coupling and d/ds matrices at one bias.
void dump_matrices(std::ostream& os, const Model& model, BiasPoint b);

}  // namespace qmem
