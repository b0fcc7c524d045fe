#include "qmem/rwa.hpp"

#include <cmath>
#include <string>

#include "qmem/errors.hpp"

namespace qmem {

double RwaAmplitudes::norm() const {
  return std::norm(c00) + std::norm(c01) + std::norm(c10) + std::norm(c11);
}

RwaAmplitudes rwa_storage(const QubitState& q, double omega_rabi, double t) {
  if (t < 0.0) throw ConfigError("rwa_storage needs t >= 0");
  const double half = 0.5 * omega_rabi * t;
  return {q.alpha, q.beta * std::sin(half), q.beta * std::cos(half), {}};
}

RwaAmplitudes rwa_retrieval(const RwaAmplitudes& stored, double omega_rabi, double dt) {
  if (dt < 0.0) throw ConfigError("rwa_retrieval needs t - t1 >= 0");
  const double half = 0.5 * omega_rabi * dt;
  const auto beta = stored.c01;
  return {stored.c00, beta * std::cos(half), -beta * std::sin(half), {}};
}

}  // namespace qmem
