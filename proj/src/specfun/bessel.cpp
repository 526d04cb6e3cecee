#include <cmath>

#include "pv/detail/quad.hpp"
#include "pv/specfun.hpp"

namespace pv {

namespace {

using detail::QC;

void check_domain(cplx z) {
  if (!finite(z)) throw Error(ErrorKind::invalid_argument, "bessel_j: non-finite argument");
  if (z.imag() == 0.0 && z.real() < 0.0)
    throw Error(ErrorKind::invalid_argument, "bessel_j: |arg z| < pi required");
}

bool negative_integer(double mu, int& n) {
  if (mu < 0.0 && mu == std::floor(mu)) {
    n = static_cast<int>(-mu);
    return true;
  }
  return false;
}

}  // namespace

cplx bessel_j_series(double mu, cplx z, const SpecfunAccuracy& acc) {
  acc.validate();
  check_domain(z);
  int n = 0;
  if (negative_integer(mu, n)) {
    const cplx v = bessel_j_series(static_cast<double>(n), z, acc);
    return (n % 2 == 0) ? v : -v;
  }
  if (z == 0.0) {
    if (mu == 0.0) return 1.0;
    if (mu > 0.0) return 0.0;
    throw Error(ErrorKind::pole, "bessel_j: J_mu(0) is infinite for negative non-integer mu");
  }
  const cplx w = -z * z / 4.0;
  // Terms reach ~e^{|z|} times the result near |z| = 30, so the sum is
  // accumulated in binary128.
  const QC wq(w);
  QC term(1);
  QC sum(1);
  const double wabs = std::abs(w);
  int k = 1;
  for (;; ++k) {
    if (k > acc.max_terms)
      throw Error(ErrorKind::non_convergence, "bessel_j: power series exceeded max_terms");
    const __float128 denom = static_cast<__float128>(k) * (static_cast<__float128>(mu) + k);
    term = term * wq * QC(1 / denom);
    sum += term;
    const double dk = static_cast<double>(k) * (mu + k);
    if (std::fabs(dk) > wabs && term.mag() <= 1e-20 * sum.mag()) break;
  }
  const cplx s = sum.to_cplx();
  return std::exp(mu * std::log(z / 2.0)) * rgamma(mu + 1.0) * s;
}

cplx bessel_j_asymptotic(double mu, cplx z, const SpecfunAccuracy& acc) {
  acc.validate();
  check_domain(z);
  if (z == 0.0) throw Error(ErrorKind::invalid_argument, "bessel_j: asymptotic branch needs z != 0");
  // The Hankel form loses accuracy past the rays arg z = +-pi/2; use
  // J_mu(z) = e^{+-i pi mu} J_mu(-z) there.
  if (z.real() < 0.0) {
    const double sg = z.imag() >= 0.0 ? 1.0 : -1.0;
    return std::exp(sg * I * PI * mu) * bessel_j_asymptotic(mu, -z, acc);
  }
  const double m2 = 4.0 * mu * mu;
  cplx p = 1.0, q = 0.0;
  cplx ak = 1.0;  // a_k(mu) / z^k
  double prev = 1.0;
  bool converged = false;
  for (int k = 1; k <= acc.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    ak *= (m2 - odd * odd) / (8.0 * k) / z;
    const double mag_k = std::abs(ak);
    if (mag_k > prev && odd > 2.0 * std::fabs(mu)) break;  // past the smallest term
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sign * ak;
    else
      q += sign * ak;
    prev = mag_k;
    if (mag_k <= 1e-3 * acc.target_rel_err * (std::abs(p) + std::abs(q))) {
      converged = true;
      break;
    }
    if (ak == 0.0) {
      converged = true;
      break;
    }
  }
  if (!converged && prev > acc.target_rel_err * (std::abs(p) + std::abs(q)))
    throw Error(ErrorKind::non_convergence, "bessel_j: asymptotic series cannot reach target accuracy at this |z|");
  const cplx omega = z - (mu / 2.0 + 0.25) * PI;
  return std::sqrt(2.0 / (PI * z)) * (p * std::cos(omega) - q * std::sin(omega));
}

cplx bessel_j(double mu, cplx z, const SpecfunAccuracy& acc) {
  if (std::abs(z) <= kBesselCrossover) return bessel_j_series(mu, z, acc);
  return bessel_j_asymptotic(mu, z, acc);
}

}  // namespace pv
