#include <cmath>

#include "pv/connect.hpp"
#include "pv/specfun.hpp"

namespace pv {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kLn2 = 0.69314718055994530942;
const cplx kEighthTurn{0.70710678118654752440, 0.70710678118654752440};  // e^{i pi/4}

void check_poles(const Params& p) {
  p.validate();
  const cplx it = I * p.theta;
  if (std::abs(p.rho - it) < kPoleGuard || std::abs(p.rho + it) < kPoleGuard)
    throw Error(ErrorKind::pole, "rho is within 1e-8 of +-i theta");
}

void require_admissible(const Params& p) {
  check_poles(p);
  if (!admissible(p))
    throw Error(ErrorKind::inadmissible,
                "rho must not lie on the imaginary axis with |Im rho| >= theta");
}

}  // namespace

cplx kappa(const Params& p) {
  p.validate();
  const cplx den = I * p.rho - p.theta;
  if (std::abs(den) < kPoleGuard) throw Error(ErrorKind::pole, "kappa: pole at rho = -i theta");
  return (I * p.rho + p.theta) / den;
}

cplx c_of_rho(const Params& p) {
  check_poles(p);
  const double s = std::sin(PI * p.theta);
  const cplx arg = (1.0 + p.rho * p.rho / (p.theta * p.theta)) * (s * s);
  return -std::log(arg) / (4.0 * PI);
}

cplx a_of_rho(const Params& p) {
  require_admissible(p);
  const cplx c = c_of_rho(p);
  const double ang = PI * p.theta;
  const cplx bracket = std::cos(ang) - (p.rho / p.theta) * std::sin(ang);
  return cgamma(1.0 + 2.0 * I * c) * kEighthTurn * std::exp(-6.0 * I * c * kLn2 + PI * c) * bracket /
         (2.0 * kSqrtPi);
}

cplx b_of_rho(const Params& p) {
  require_admissible(p);
  const cplx c = c_of_rho(p);
  const double ang = PI * p.theta;
  const cplx bracket = std::cos(ang) + (p.rho / p.theta) * std::sin(ang);
  return cgamma(1.0 - 2.0 * I * c) * std::conj(kEighthTurn) * std::exp(6.0 * I * c * kLn2 + PI * c) * bracket /
         (2.0 * kSqrtPi);
}

ConnectionPrediction predict(const Params& p) {
  require_admissible(p);
  return {a_of_rho(p), b_of_rho(p), c_of_rho(p), kappa(p)};
}

bool admissible(const Params& p) {
  if (!std::isfinite(p.theta) || !finite(p.rho)) return false;
  if (p.rho.real() != 0.0) return true;
  return std::fabs(p.rho.imag()) < std::fabs(p.theta);
}

InvariantPair invariants_small_x(const Params& p) {
  require_admissible(p);
  const cplx plus = I * p.rho + p.theta, minus = I * p.rho - p.theta;
  return {plus / minus, minus / plus};
}

cplx ratio_b(cplx a, cplx b) {
  const cplx ab = a * b;
  return -(2.0 * kSqrtPi * b * rgamma(1.0 - 2.0 * I * ab)) * std::conj(kEighthTurn) *
         std::exp(-PI * ab - 6.0 * I * ab * kLn2);
}

cplx ratio_a(cplx a, cplx b) {
  const cplx ab = a * b;
  return (2.0 * kSqrtPi * a * rgamma(1.0 + 2.0 * I * ab)) * kEighthTurn * std::exp(-PI * ab + 6.0 * I * ab * kLn2);
}

InvariantPair invariants_large_x(cplx a, cplx b, double theta) {
  if (!finite(a) || !finite(b) || !std::isfinite(theta))
    throw Error(ErrorKind::invalid_argument, "invariants_large_x: non-finite input");
  const cplx ab = a * b;
  // 1/Gamma vanishes at the poles, which would silently zero the ratios.
  for (cplx z : {1.0 - 2.0 * I * ab, 1.0 + 2.0 * I * ab})
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
      throw Error(ErrorKind::pole, "invariants_large_x: Gamma pole at 1 +- 2i ab");
  const cplx up = I * std::exp(I * PI * theta), down = I * std::exp(-I * PI * theta);
  const cplx rb = ratio_b(a, b), ra = ratio_a(a, b);
  return {(up - rb) / (down - rb), (up - ra) / (down - ra)};
}

cplx asym_phase(double x, cplx ab) { return x / 4.0 - ab * std::log(x / 4.0); }

cplx asym_f1(double x, cplx a, cplx b) {
  const cplx e = std::exp(2.0 * I * asym_phase(x, a * b));
  return a * e + b / e;
}

cplx asym_f2(double x, cplx a, cplx b) {
  const cplx e = std::exp(2.0 * I * asym_phase(x, a * b));
  return a * e - b / e;
}

static void check_tail(double x) {
  if (!(x >= 10.0)) throw Error(ErrorKind::invalid_argument, "asymptotic models need x >= 10");
}

cplx asym_model_y(double x, cplx a, cplx b, double theta) {
  check_tail(x);
  const cplx f1 = asym_f1(x, a, b);
  return -1.0 + 4.0 * f1 / std::sqrt(x) + 4.0 * (2.0 * theta - 1.0 - 2.0 * f1 * f1) / x;
}

cplx asym_model_v(double x, cplx a, cplx b, double theta) {
  check_tail(x);
  const cplx f1 = asym_f1(x, a, b), f2 = asym_f2(x, a, b);
  return -x / 8.0 - 0.25 * I * std::sqrt(x) * f2 + 0.5 * (f1 * f1 - theta);
}

}  // namespace pv
