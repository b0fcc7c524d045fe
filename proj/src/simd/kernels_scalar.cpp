#include <algorithm>
#include <cmath>

#include "qmem/simd/kernels.hpp"

namespace qmem::simd {
namespace {

void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* row = a + i * n;
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      re += row[j].real() * x[j].real() - row[j].imag() * x[j].imag();
      im += row[j].real() * x[j].imag() + row[j].imag() * x[j].real();
    }
    y[i] = {re, im};
  }
}

void cmul_conj(const cplx* p, const cplx* x, cplx* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double pr = p[k].real(), pi = p[k].imag();
    const double xr = x[k].real(), xi = x[k].imag();
    out[k] = {pr * xr + pi * xi, pr * xi - pi * xr};
  }
}

void cmul_neg_i(const cplx* p, const cplx* x, cplx* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double pr = p[k].real(), pi = p[k].imag();
    const double xr = x[k].real(), xi = x[k].imag();
    const double re = pr * xr - pi * xi;
    const double im = pr * xi + pi * xr;
    out[k] = {im, -re};
  }
}

void diag_add_neg_i(const double* e, const cplx* x, const cplx* w, cplx* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = e[k] * x[k].real() + w[k].real();
    const double im = e[k] * x[k].imag() + w[k].imag();
    out[k] = {im, -re};
  }
}

void lincomb(const double* y, const double* const* k, const double* coef, std::size_t nk,
             double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    double acc = y[i];
    for (std::size_t j = 0; j < nk; ++j) acc += coef[j] * k[j][i];
    out[i] = acc;
  }
}

double err_sumsq(const double* err, const double* y0, const double* y1, double atol, double rtol,
                 std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    acc += r * r;
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar",   cmatvec, cmul_conj, cmul_neg_i,
                                 diag_add_neg_i, lincomb, err_sumsq};
  return table;
}

}  // namespace qmem::simd
