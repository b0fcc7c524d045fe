#pragma once

// Data-parallel inner loops of the amplitude integrators. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// active table is chosen once at startup from CPUID and may be overridden
// with QMEM_KERNELS=scalar|avx2.

#include <complex>
#include <cstddef>
#include <string_view>

namespace qmem::simd {

using cplx = std::complex<double>;

struct KernelTable {
  const char* name;

  /// y = A x for a dense row-major n x n complex matrix.
  void (*cmatvec)(const cplx* a, const cplx* x, cplx* y, std::size_t n);

  /// out[k] = conj(p[k]) * x[k]
  void (*cmul_conj)(const cplx* p, const cplx* x, cplx* out, std::size_t n);

  /// out[k] = -i * p[k] * x[k]
  void (*cmul_neg_i)(const cplx* p, const cplx* x, cplx* out, std::size_t n);

  /// out[k] = -i * (e[k] * x[k] + w[k]), e real
  void (*diag_add_neg_i)(const double* e, const cplx* x, const cplx* w, cplx* out,
                         std::size_t n);

  /// out[i] = y[i] + sum_j coef[j] * k[j][i] over `len` doubles.
  void (*lincomb)(const double* y, const double* const* k, const double* coef, std::size_t nk,
                  double* out, std::size_t len);

  /// sum_i (err[i] / (atol + rtol * max(|y0[i]|, |y1[i]|)))^2
  double (*err_sumsq)(const double* err, const double* y0, const double* y1, double atol,
                      double rtol, std::size_t len);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// The table used by the integrators.
const KernelTable& active_kernels();

/// Force a table by name ("scalar", "avx2", "auto"). Returns false when the
/// request cannot be honoured; the active table is then unchanged.
bool select_kernels(std::string_view name);

}  // namespace qmem::simd
