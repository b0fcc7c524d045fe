#pragma once

// Harmonic-well eigenfunctions on a phase grid, used to check the analytic
// matrix elements by brute-force quadrature. Independent of src/basis.cpp.

#include <cmath>
#include <vector>

namespace oracle {

struct Well {
  double centre;  // phase of the minimum
  double width;   // oscillator length
};

// Well of the tilted washboard for E_c/E_J = ratio at bias s.
inline Well tilted_well(double ec_over_ej, double s) {
  const double curvature = std::sqrt(1.0 - s * s);
  return {std::asin(s), std::pow(2.0 * ec_over_ej / curvature, 0.25)};
}

// Normalised psi_m(phi) via the stable three-term recurrence.
inline std::vector<double> eigenfunctions(const Well& w, double phi, int levels) {
  const double x = (phi - w.centre) / w.width;
  std::vector<double> psi(levels);
  psi[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x) / std::sqrt(w.width);
  if (levels > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int m = 2; m < levels; ++m)
    psi[m] = std::sqrt(2.0 / m) * x * psi[m - 1] - std::sqrt((m - 1.0) / m) * psi[m - 2];
  return psi;
}

// <m|_a |n>_b on a uniform grid wide enough for both wells (trapezoid rule
// is spectrally accurate for these Gaussians).
inline std::vector<std::vector<double>> overlaps(const Well& a, const Well& b, int levels,
                                                 int points = 6001) {
  const double lo = std::min(a.centre, b.centre) - 14.0 * std::max(a.width, b.width);
  const double hi = std::max(a.centre, b.centre) + 14.0 * std::max(a.width, b.width);
  const double h = (hi - lo) / (points - 1);
  std::vector<std::vector<double>> out(levels, std::vector<double>(levels, 0.0));
  for (int i = 0; i < points; ++i) {
    const double phi = lo + h * i;
    const auto pa = eigenfunctions(a, phi, levels);
    const auto pb = eigenfunctions(b, phi, levels);
    for (int m = 0; m < levels; ++m)
      for (int n = 0; n < levels; ++n) out[m][n] += pa[m] * pb[n] * h;
  }
  return out;
}

// <m|d/ds|n> by central differences of the overlaps <m(s)|n(s +- delta)>.
inline std::vector<std::vector<double>> central_dds(double ec_over_ej, double s, int levels,
                                                    double delta) {
  const Well w = tilted_well(ec_over_ej, s);
  const auto plus = overlaps(w, tilted_well(ec_over_ej, s + delta), levels);
  const auto minus = overlaps(w, tilted_well(ec_over_ej, s - delta), levels);
  std::vector<std::vector<double>> out(levels, std::vector<double>(levels));
  for (int m = 0; m < levels; ++m)
    for (int n = 0; n < levels; ++n) out[m][n] = (plus[m][n] - minus[m][n]) / (2.0 * delta);
  return out;
}

// Central differences at delta and 2 delta, Richardson-combined to cancel the
// delta^2 term, which reaches a few 1e-6 for the widest wells.
inline std::vector<std::vector<double>> dds(double ec_over_ej, double s, int levels,
                                            double delta = 1e-5) {
  const auto fine = central_dds(ec_over_ej, s, levels, delta);
  const auto coarse = central_dds(ec_over_ej, s, levels, 2.0 * delta);
  auto out = fine;
  for (int m = 0; m < levels; ++m)
    for (int n = 0; n < levels; ++n) out[m][n] = (4.0 * fine[m][n] - coarse[m][n]) / 3.0;
  return out;
}

// <m|phi|n> by quadrature.
inline std::vector<std::vector<double>> phi_elements(double ec_over_ej, double s, int levels,
                                                     int points = 6001) {
  const Well w = tilted_well(ec_over_ej, s);
  const double lo = w.centre - 14.0 * w.width, hi = w.centre + 14.0 * w.width;
  const double h = (hi - lo) / (points - 1);
  std::vector<std::vector<double>> out(levels, std::vector<double>(levels, 0.0));
  for (int i = 0; i < points; ++i) {
    const double phi = lo + h * i;
    const auto p = eigenfunctions(w, phi, levels);
    for (int m = 0; m < levels; ++m)
      for (int n = 0; n < levels; ++n) out[m][n] += p[m] * phi * p[n] * h;
  }
  return out;
}

}  // namespace oracle
