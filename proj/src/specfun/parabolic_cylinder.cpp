#include <cmath>

#include "pv/specfun.hpp"

namespace pv {

namespace {

constexpr double kSeriesRadius = 3.0;
constexpr double kRayTol = 1e-14;
const double kSqrt2Pi = std::sqrt(2.0 * PI);
const double kSqrtPi = std::sqrt(PI);

// Maclaurin expansion of the solution of w'' = (z^2/4 + a) w, a = -nu - 1/2,
// with the D_nu values at the origin.
DValue maclaurin(cplx nu, cplx z, const SpecfunAccuracy& acc) {
  const cplx a = -nu - 0.5;
  const double ln2 = std::log(2.0);
  const cplx u0 = kSqrtPi * std::exp(-(a / 2.0 + 0.25) * ln2) * rgamma(0.75 + a / 2.0);
  const cplx u0p = -kSqrtPi * std::exp(-(a / 2.0 - 0.25) * ln2) * rgamma(0.25 + a / 2.0);
  // d_k = c_k z^k
  cplx dkm3 = 0.0, dkm2 = 0.0, dkm1 = u0, dk = u0p * z;
  cplx w = dkm1 + dk;
  cplx wp = u0p;
  double maxterm = std::max(std::abs(dkm1), std::abs(dk));
  const cplx z2 = z * z;
  for (int k = 1; k <= acc.max_terms; ++k) {
    // (k+1) k c_{k+1} = a c_{k-1} + c_{k-3}/4
    const cplx next = z2 * (a * dkm1 + z2 * dkm3 / 4.0) / (static_cast<double>(k + 1) * k);
    dkm3 = dkm2;
    dkm2 = dkm1;
    dkm1 = dk;
    dk = next;
    w += dk;
    if (z != 0.0) wp += static_cast<double>(k + 1) * dk / z;
    maxterm = std::max(maxterm, std::abs(dk));
    const double scale = std::max(std::abs(w), 1e-3 * maxterm);
    if (k > 4 && std::abs(a) < static_cast<double>(k) * k &&
        std::abs(dk) + std::abs(dkm1) + std::abs(dkm2) <= 1e-18 * scale)
      return {w, wp};
  }
  throw Error(ErrorKind::non_convergence, "parabolic_cylinder_d: Maclaurin series exceeded max_terms");
}

// One Taylor step of w'' = (z^2/4 + a) w from z0 to z0 + h.
DValue taylor_step(cplx a, cplx z0, DValue v, cplx h) {
  const cplx p0 = z0 * z0 / 4.0 + a;
  const cplx p1 = z0 / 2.0;
  const cplx h2 = h * h;
  // d_k = c_k h^k
  cplx dkm3 = 0.0, dkm2 = 0.0, dkm1 = v.d, dk = v.dp * h;
  cplx w = dkm1 + dk;
  cplx whp = dk;  // h * w'
  for (int k = 1; k < 400; ++k) {
    // (k+1) k c_{k+1} = p0 c_{k-1} + p1 c_{k-2} + c_{k-3}/4
    const cplx next = h2 * (p0 * dkm1 + h * (p1 * dkm2 + h * dkm3 / 4.0)) / (static_cast<double>(k + 1) * k);
    dkm3 = dkm2;
    dkm2 = dkm1;
    dkm1 = dk;
    dk = next;
    w += dk;
    whp += static_cast<double>(k + 1) * dk;
    if (k > 4 && std::abs(dk) + std::abs(dkm1) + std::abs(dkm2) <= 1e-18 * (std::abs(w) + std::abs(whp)))
      return {w, whp / h};
  }
  throw Error(ErrorKind::non_convergence, "parabolic_cylinder_d: Taylor step did not converge");
}

DValue march(cplx nu, cplx from, DValue v, cplx to) {
  const cplx a = -nu - 0.5;
  cplx z = from;
  const double dist = std::abs(to - from);
  if (dist == 0.0) return v;
  const cplx dir = (to - from) / dist;
  double done = 0.0;
  while (done < dist) {
    const double p = std::abs(z * z / 4.0 + a);
    const double hmax = std::min(0.5, 1.5 / std::sqrt(std::max(p, 1e-300)));
    const double step = std::min(hmax, dist - done);
    const cplx h = (done + step >= dist) ? (to - z) : dir * step;
    v = taylor_step(a, z, v, h);
    z += h;
    done += step;
  }
  return v;
}

// Recessive large-|z| form with derivative.
DValue recessive(cplx nu, cplx z) {
  const cplx iz2 = 1.0 / (z * z);
  cplx t = 1.0, s = 1.0, sd = 0.0;  // sd = z * dS/dz
  double prev = 1.0;
  for (int k = 1; k < 2000; ++k) {
    t *= -(-nu + (2.0 * k - 2.0)) * (-nu + (2.0 * k - 1.0)) / (2.0 * k) * iz2;
    const double m = std::abs(t);
    if (m > prev && k > std::abs(nu)) break;
    s += t;
    sd += -2.0 * k * t;
    prev = m;
    if (m <= 1e-17 * std::abs(s)) break;
  }
  const cplx pre = std::exp(nu * std::log(z) - z * z / 4.0);
  const cplx d = pre * s;
  const cplx dp = pre * ((nu / z - z / 2.0) * s + sd / z);
  return {d, dp};
}

// Second, exponentially large term of the two-term form; upper = true for
// pi/4 < arg z < 5pi/4.
DValue growing_part(cplx nu, cplx z, bool upper) {
  const cplx iz2 = 1.0 / (z * z);
  cplx t = 1.0, s = 1.0, sd = 0.0;
  double prev = 1.0;
  for (int k = 1; k < 2000; ++k) {
    t *= (nu + (2.0 * k - 1.0)) * (nu + 2.0 * k) / (2.0 * k) * iz2;
    const double m = std::abs(t);
    if (m > prev && k > std::abs(nu) + 1.0) break;
    s += t;
    sd += -2.0 * k * t;
    prev = m;
    if (m <= 1e-17 * std::abs(s)) break;
  }
  const cplx rg = rgamma(-nu);
  if (rg == 0.0) return {0.0, 0.0};
  const cplx phase = std::exp((upper ? 1.0 : -1.0) * I * PI * nu);
  const cplx pre = -kSqrt2Pi * rg * phase * std::exp((-nu - 1.0) * std::log(z) + z * z / 4.0);
  return {pre * s, pre * (((-nu - 1.0) / z + z / 2.0) * s + sd / z)};
}

bool on_stokes_ray(cplx z) {
  return std::fabs(std::fabs(std::arg(z)) - PI / 2.0) <= kRayTol;
}

DValue evaluate(cplx nu, cplx z, const SpecfunAccuracy& acc, StokesSide side);

// D_nu(z) for arg z in (pi/2, pi] (upper) or (-pi, -pi/2) via the right half-plane.
DValue connect_left(cplx nu, cplx z, const SpecfunAccuracy& acc) {
  const bool upper = std::arg(z) > 0.0;
  const double sg = upper ? 1.0 : -1.0;
  const DValue d1 = evaluate(nu, -z, acc, StokesSide::recessive);
  const cplx rg = rgamma(-nu);
  const cplx e1 = std::exp(sg * I * PI * nu);
  DValue out{e1 * d1.d, -e1 * d1.dp};
  if (rg != 0.0) {
    const cplx rot = -sg * I;  // argument of the partner is rot * z
    const DValue d2 = evaluate(-nu - 1.0, rot * z, acc, StokesSide::recessive);
    const cplx e2 = kSqrt2Pi * rg * std::exp(sg * I * PI * (nu + 1.0) / 2.0);
    out.d += e2 * d2.d;
    out.dp += e2 * rot * d2.dp;
  }
  return out;
}

DValue evaluate(cplx nu, cplx z, const SpecfunAccuracy& acc, StokesSide side) {
  const double r = std::abs(z);
  if (r <= kSeriesRadius) return maclaurin(nu, z, acc);
  const double theta = std::arg(z);
  const double big = pcd_asymptotic_radius(nu);
  const bool ray = on_stokes_ray(z);
  if (r >= big) {
    if (ray && side == StokesSide::unspecified)
      throw Error(ErrorKind::sector_ambiguity,
                  "parabolic_cylinder_d: arg z lies on a Stokes ray; pick recessive or two_term");
    if (std::fabs(theta) < PI / 2.0 && !ray) return recessive(nu, z);
    if (ray && side == StokesSide::recessive) return recessive(nu, z);
    const bool upper = theta > 0.0;
    DValue a = recessive(nu, z);
    const DValue g = growing_part(nu, z, upper);
    return {a.d + g.d, a.dp + g.dp};
  }
  if (std::fabs(theta) <= PI / 4.0) {
    const cplx start = big * std::exp(I * theta);
    return march(nu, start, recessive(nu, start), z);
  }
  if (std::fabs(theta) <= PI / 2.0 + kRayTol) {
    const cplx start = kSeriesRadius * std::exp(I * theta);
    return march(nu, start, maclaurin(nu, start, acc), z);
  }
  return connect_left(nu, z, acc);
}

}  // namespace

double pcd_asymptotic_radius(cplx nu) { return std::max(15.0, 3.0 * std::abs(nu)); }

DValue parabolic_cylinder_d_with_derivative(cplx nu, cplx z, const SpecfunAccuracy& acc, StokesSide side) {
  acc.validate();
  if (!finite(nu) || !finite(z))
    throw Error(ErrorKind::invalid_argument, "parabolic_cylinder_d: non-finite argument");
  if (std::abs(z) > 1e4)
    throw Error(ErrorKind::invalid_argument, "parabolic_cylinder_d: |z| > 1e4 is out of range");
  return evaluate(nu, z, acc, side);
}

cplx parabolic_cylinder_d(cplx nu, cplx z, const SpecfunAccuracy& acc, StokesSide side) {
  return parabolic_cylinder_d_with_derivative(nu, z, acc, side).d;
}

cplx parabolic_cylinder_d_asymptotic(cplx nu, cplx z, PcdForm form) {
  if (z == 0.0) throw Error(ErrorKind::invalid_argument, "parabolic_cylinder_d_asymptotic: z = 0");
  const double theta = std::arg(z);
  if (form == PcdForm::recessive) {
    if (std::fabs(theta) >= 3.0 * PI / 4.0)
      throw Error(ErrorKind::invalid_argument, "recessive form needs |arg z| < 3pi/4");
    return recessive(nu, z).d;
  }
  if (std::fabs(theta) <= PI / 4.0)
    throw Error(ErrorKind::invalid_argument, "two-term form needs pi/4 < |arg z| <= pi");
  return recessive(nu, z).d + growing_part(nu, z, theta > 0.0).d;
}

}  // namespace pv
