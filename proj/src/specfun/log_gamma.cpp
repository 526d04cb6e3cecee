#include <cmath>

#include "pv/specfun.hpp"

namespace pv {

namespace {

// B_{2k} / (2k (2k-1)), k = 1..8
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
};

constexpr double kShift = 15.0;

bool is_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx stirling(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx sum = 0.0;
  cplx p = inv;
  for (double c : kStirling) {
    sum += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * PI) + sum;
}

}  // namespace

void SpecfunAccuracy::validate() const {
  if (!(target_rel_err > 0.0 && target_rel_err <= 1e-6))
    throw Error(ErrorKind::invalid_argument, "SpecfunAccuracy: target_rel_err must lie in (0, 1e-6]");
  if (max_terms < 50)
    throw Error(ErrorKind::invalid_argument, "SpecfunAccuracy: max_terms must be >= 50");
}

cplx log_gamma(cplx z) {
  if (!finite(z)) throw Error(ErrorKind::invalid_argument, "log_gamma: non-finite argument");
  if (is_pole(z)) throw Error(ErrorKind::pole, "log_gamma: pole at non-positive integer");
  if (z.real() >= kShift) return stirling(z);
  const int n = static_cast<int>(std::ceil(kShift - z.real()));
  // Summing principal logs keeps the result continuous off (-inf, 0].
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::log(z + static_cast<double>(k));
  return stirling(z + static_cast<double>(n)) - acc;
}

cplx cgamma(cplx z) { return std::exp(log_gamma(z)); }

cplx rgamma(cplx z) {
  if (is_pole(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

}  // namespace pv
