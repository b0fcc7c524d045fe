// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "qmem/simd/kernels.hpp"

namespace qmem::simd {

const KernelTable& avx2_kernel_table();

namespace {

inline const double* dp(const cplx* z) { return reinterpret_cast<const double*>(z); }
inline double* dp(cplx* z) { return reinterpret_cast<double*>(z); }

// [re0 im0 re1 im1] * [re0 im0 re1 im1] as complex products.
inline __m256d mul2(__m256d p, __m256d x) {
  const __m256d p_re = _mm256_movedup_pd(p);
  const __m256d p_im = _mm256_permute_pd(p, 0xF);
  const __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(p_re, x, _mm256_mul_pd(p_im, x_sw));
}

inline __m256d mul2_conj(__m256d p, __m256d x) {
  const __m256d p_re = _mm256_movedup_pd(p);
  const __m256d p_im = _mm256_permute_pd(p, 0xF);
  const __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmsubadd_pd(p_re, x, _mm256_mul_pd(p_im, x_sw));
}

// (re, im) -> (im, -re)
inline __m256d rot_neg_i(__m256d z) {
  const __m256d sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  return _mm256_xor_pd(_mm256_permute_pd(z, 0x5), sign);
}

void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n) {
  const std::size_t pairs = n / 2;
  const double* xd = dp(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = dp(a + i * n);
    __m256d acc_direct = _mm256_setzero_pd();   // ar*xr, ai*xi
    __m256d acc_swapped = _mm256_setzero_pd();  // ar*xi, ai*xr
    for (std::size_t j = 0; j < pairs; ++j) {
      const __m256d av = _mm256_loadu_pd(row + 4 * j);
      const __m256d xv = _mm256_loadu_pd(xd + 4 * j);
      acc_direct = _mm256_fmadd_pd(av, xv, acc_direct);
      acc_swapped = _mm256_fmadd_pd(av, _mm256_permute_pd(xv, 0x5), acc_swapped);
    }
    alignas(32) double d[4];
    alignas(32) double s[4];
    _mm256_store_pd(d, acc_direct);
    _mm256_store_pd(s, acc_swapped);
    double re = (d[0] - d[1]) + (d[2] - d[3]);
    double im = (s[0] + s[1]) + (s[2] + s[3]);
    if (n % 2) {
      const std::size_t j = n - 1;
      const cplx av = a[i * n + j];
      re += av.real() * x[j].real() - av.imag() * x[j].imag();
      im += av.real() * x[j].imag() + av.imag() * x[j].real();
    }
    y[i] = {re, im};
  }
}

void cmul_conj(const cplx* p, const cplx* x, cplx* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d r = mul2_conj(_mm256_loadu_pd(dp(p + k)), _mm256_loadu_pd(dp(x + k)));
    _mm256_storeu_pd(dp(out + k), r);
  }
  for (; k < n; ++k) {
    const double pr = p[k].real(), pi = p[k].imag();
    out[k] = {pr * x[k].real() + pi * x[k].imag(), pr * x[k].imag() - pi * x[k].real()};
  }
}

void cmul_neg_i(const cplx* p, const cplx* x, cplx* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d r = mul2(_mm256_loadu_pd(dp(p + k)), _mm256_loadu_pd(dp(x + k)));
    _mm256_storeu_pd(dp(out + k), rot_neg_i(r));
  }
  for (; k < n; ++k) {
    const double pr = p[k].real(), pi = p[k].imag();
    const double re = pr * x[k].real() - pi * x[k].imag();
    const double im = pr * x[k].imag() + pi * x[k].real();
    out[k] = {im, -re};
  }
}

void diag_add_neg_i(const double* e, const cplx* x, const cplx* w, cplx* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m128d e2 = _mm_loadu_pd(e + k);
    const __m256d ev = _mm256_permute4x64_pd(_mm256_castpd128_pd256(e2), 0x50);
    const __m256d t =
        _mm256_fmadd_pd(ev, _mm256_loadu_pd(dp(x + k)), _mm256_loadu_pd(dp(w + k)));
    _mm256_storeu_pd(dp(out + k), rot_neg_i(t));
  }
  for (; k < n; ++k) {
    const double re = e[k] * x[k].real() + w[k].real();
    const double im = e[k] * x[k].imag() + w[k].imag();
    out[k] = {im, -re};
  }
}

void lincomb(const double* y, const double* const* k, const double* coef, std::size_t nk,
             double* out, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d acc = _mm256_loadu_pd(y + i);
    for (std::size_t j = 0; j < nk; ++j)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coef[j]), _mm256_loadu_pd(k[j] + i), acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < len; ++i) {
    double acc = y[i];
    for (std::size_t j = 0; j < nk; ++j) acc = std::fma(coef[j], k[j][i], acc);
    out[i] = acc;
  }
}

double err_sumsq(const double* err, const double* y0, const double* y1, double atol, double rtol,
                 std::size_t len) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  const __m256d va = _mm256_set1_pd(atol);
  const __m256d vr = _mm256_set1_pd(rtol);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d a0 = _mm256_and_pd(_mm256_loadu_pd(y0 + i), abs_mask);
    const __m256d a1 = _mm256_and_pd(_mm256_loadu_pd(y1 + i), abs_mask);
    const __m256d scale = _mm256_fmadd_pd(vr, _mm256_max_pd(a0, a1), va);
    const __m256d r = _mm256_div_pd(_mm256_loadu_pd(err + i), scale);
    acc = _mm256_fmadd_pd(r, r, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    total += r * r;
  }
  return total;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2",         cmatvec, cmul_conj, cmul_neg_i,
                                 diag_add_neg_i, lincomb, err_sumsq};
  return table;
}

}  // namespace qmem::simd
