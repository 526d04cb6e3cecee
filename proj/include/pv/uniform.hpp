#pragma once

#include <functional>
#include <vector>

#include "pv/common.hpp"

namespace pv {

// Data of the scalar equation phi'' = -x^2 Q(lambda, x) phi at one x.
struct UniformFrame {
  double x = 0.0;
  cplx a = 0.0;
  cplx b = 0.0;
  cplx ab = 0.0;
  double theta = 0.0;
  cplx s = 0.0;   // x/4 - ab ln(x/4)
  cplx f1 = 0.0;  // a e^{2is} + b e^{-2is}
  cplx f2 = 0.0;  // a e^{2is} - b e^{-2is}
  // Keep only -(2 lambda - 1)^2 / (16 lambda (lambda - 1)); the two turning points
  // merge at 1/2 and alpha = 0.
  bool leading_only = false;

  // Throws invalid_argument for x < 50 or non-finite input.
  static UniformFrame make(double x, cplx a, cplx b, double theta, bool leading_only = false);
};

struct TurningData {
  cplx lambda1;
  cplx lambda2;
  cplx alpha_sq;
  cplx alpha;  // the root of alpha_sq nearest lambda2 - 1/2, so zeta(lambda2) = alpha
  cplx nu;     // -1/2 + (i/2) x alpha^2
};

//   Q = -(2l-1)^2/(16 l(l-1)) + Q1/x - Q2/x^{3/2}
//   Q1 = [4ab + i - i(l - 1/2) H'/H] / (4 l(l-1))
//   Q2 = [F1 + F2 - (l - 1/2) F2 H'/H] / (2 l(l-1))
//   H  = i x^{1/2} (l - 1/2)^2 + l F1 - F2/2
// Throws pole at l in {0, 1} or where H vanishes.
cplx eval_Q(cplx lambda, const UniformFrame& f);
cplx eval_Q_prime(cplx lambda, const UniformFrame& f);

// Zeros of H, i.e. the poles of Q introduced by H'/H.
std::vector<cplx> h_zeros(const UniformFrame& f);

// 1/2 -+ x^{-1/2} sqrt(4ab + i)
std::pair<cplx, cplx> turning_point_seeds(const UniformFrame& f);

// Newton from the seeds, then alpha_sq and nu.
TurningData turning_points(const UniformFrame& f);

struct QuadratureOptions {
  double rel_tol = 1e-12;
  int max_depth = 30;
};

// alpha^2 = (2/(pi i)) times the integral of Q^{1/2} from lambda1 to lambda2 on the
// upper edge of the cut, the segment lambda = m + u h, u = sin(phi).
cplx alpha_via_integral(const UniformFrame& f, cplx lambda1, cplx lambda2, const QuadratureOptions& q = {});

// Q^{1/2} with the cut on the straight segment [lambda1, lambda2] and
// Q^{1/2} ~ lambda - 1/2 next to the pair.
cplx sqrt_Q(cplx lambda, const UniformFrame& f, const TurningData& td);

// zeta w(zeta) - alpha^2 L + alpha^2 ln alpha, halved, where w = zeta (1 - alpha^2/zeta^2)^{1/2}
// (cut on [-alpha, alpha]) and L = ln(zeta + w) + 2 pi i k.
cplx zeta_map_lhs(cplx zeta, const TurningData& td, int k = 0);

// zeta along a polyline starting at lambda2: zeta at each path point by Newton
// continuation of zeta_map_lhs = integral of Q^{1/2}. Each leg is subdivided,
// and the first leg uses lambda = lambda2 + t^2 (p - lambda2).
struct ZetaTrack {
  std::vector<cplx> zeta;
  std::vector<cplx> integral;  // integral of Q^{1/2} from lambda2
};
ZetaTrack zeta_along_path(const UniformFrame& f, const TurningData& td, const std::vector<cplx>& path);

// zeta at one point, continued along the straight segment from lambda2.
// Throws branch_ambiguity within 1e-3 |lambda1 - lambda2| of a turning point.
cplx zeta_of_lambda(cplx lambda, const UniformFrame& f, const TurningData& td);

// |Re sqrt(lambda (lambda - 1))|
double stokes_distance(cplx lambda);

// Residual of the large-lambda zeta relation at lambda = 1/2 - i x^2, reduced
// modulo pi i / 2. The relation refers to the sheet reached by circling
// lambda = 1, so the right side is taken as 2 R(1) - R(lambda).
cplx lemma31_residual(const UniformFrame& f, const TurningData& td);

// Residual of the small-lambda zeta relation at lambda = 1/x (real axis from
// lambda2), with the continued branch sqrt(lambda) = -|lambda|^{1/2}, reduced
// modulo pi i / 2. zeta is minus the principal-sheet root of the map, so
// Re zeta < 0 and ln(zeta + w) sits pi i off the principal sheet.
cplx lemma32_residual(const UniformFrame& f, const TurningData& td);

// Default spot-check segment: 1/2 + i [0.3, 1.0], 16 points.
std::vector<cplx> default_spot_segment();

struct SpotcheckResult {
  double max_deviation;  // max over non-anchor points of |phi - basis| / (|c1 B1| + |c2 B2|)
  cplx c1;
  cplx c2;
};

// Integrates phi'' = -x^2 Q phi along the segment from the basis combination
// B1 + (0.7 + 0.3i) B2 at the first point, recovers (c1, c2) by matching phi and
// phi' there, and compares with c1 B1 + c2 B2 at the remaining points, where
//   B1 = ((zeta^2 - alpha^2)/Q)^{1/4} D_nu(e^{i pi/4} (2x)^{1/2} zeta),
//   B2 = ((zeta^2 - alpha^2)/Q)^{1/4} D_{-nu-1}(e^{-i pi/4} (2x)^{1/2} zeta).
SpotcheckResult theorem21_spotcheck(const UniformFrame& f, const TurningData& td, const std::vector<cplx>& segment);

// Adaptive Gauss-Kronrod (7, 15) for complex integrands on [a, b].
cplx integrate_gk(const std::function<cplx(double)>& g, double a, double b, const QuadratureOptions& q = {});

}  // namespace pv
