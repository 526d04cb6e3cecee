#pragma once

#include "pv/common.hpp"

namespace pv {

struct SpecfunAccuracy {
  double target_rel_err = 1e-14;
  int max_terms = 500;

  // Throws invalid_argument unless target_rel_err is in (0, 1e-6] and max_terms >= 50.
  void validate() const;
};

// Continuous branch of log Gamma on C minus (-inf, 0], i.e. the sum of
// principal logs obtained from the upward recurrence.
cplx log_gamma(cplx z);
cplx cgamma(cplx z);
// 1/Gamma(z); exactly zero at the poles.
cplx rgamma(cplx z);

// Bessel J of real order, |arg z| < pi.
cplx bessel_j(double mu, cplx z, const SpecfunAccuracy& acc = {});
// The two internal branches, exposed for cross-checks.
cplx bessel_j_series(double mu, cplx z, const SpecfunAccuracy& acc = {});
cplx bessel_j_asymptotic(double mu, cplx z, const SpecfunAccuracy& acc = {});

// Radius beyond which bessel_j uses the asymptotic branch.
inline constexpr double kBesselCrossover = 20.0;

// Which large-|z| form to use on the rays arg z = +-pi/2, where both the
// recessive form and the two-term form of D_nu apply.
enum class StokesSide { unspecified, recessive, two_term };

// D_nu(z). Exact-to-rounding everywhere for |z| <= 1e4; throws sector_ambiguity
// when |z| is in the asymptotic regime, arg z = +-pi/2 and side is unspecified.
cplx parabolic_cylinder_d(cplx nu, cplx z, const SpecfunAccuracy& acc = {},
                          StokesSide side = StokesSide::unspecified);

// D_nu and dD_nu/dz together.
struct DValue {
  cplx d;
  cplx dp;
};
DValue parabolic_cylinder_d_with_derivative(cplx nu, cplx z, const SpecfunAccuracy& acc = {},
                                            StokesSide side = StokesSide::unspecified);

enum class PcdForm { recessive, two_term };

// The large-|z| expansions on their own (no series or continuation):
//   recessive: z^nu e^{-z^2/4} sum_s (-1)^s (-nu)_{2s} / (s! (2z^2)^s),      |arg z| < 3pi/4
//   two_term:  recessive - sqrt(2pi)/Gamma(-nu) e^{+-i pi nu} e^{z^2/4} z^{-nu-1}
//              sum_s (nu+1)_{2s} / (s! (2z^2)^s),                          pi/4 < +-arg z < 5pi/4
// Sums are truncated at the smallest term.
cplx parabolic_cylinder_d_asymptotic(cplx nu, cplx z, PcdForm form);

// Radius at and beyond which parabolic_cylinder_d uses the asymptotic forms.
double pcd_asymptotic_radius(cplx nu);

}  // namespace pv
