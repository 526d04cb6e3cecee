#pragma once

#include "pv/models.hpp"

namespace pv {

struct ConnectionPrediction {
  cplx a;
  cplx b;
  cplx c;
  cplx kappa;
};

struct InvariantPair {
  cplx I0;
  cplx I1;
};

// Reject rho within this distance of +-i theta.
inline constexpr double kPoleGuard = 1e-8;

// kappa = (i rho + theta)/(i rho - theta).
cplx kappa(const Params& p);

// c = -(1/4pi) log[(1 + rho^2/theta^2) sin^2(pi theta)], principal log.
cplx c_of_rho(const Params& p);

// Closed-form amplitudes of the large-x oscillation; 2^{+-6ic} is taken as e^{+-6ic ln 2}.
cplx a_of_rho(const Params& p);
cplx b_of_rho(const Params& p);

// Throws inadmissible for params outside the admissible set.
ConnectionPrediction predict(const Params& p);

// rho not on the imaginary axis with |Im rho| >= |theta|.
bool admissible(const Params& p);

InvariantPair invariants_small_x(const Params& p);
InvariantPair invariants_large_x(cplx a, cplx b, double theta);

// The two ratios entering invariants_large_x, exposed for diagnostics.
cplx ratio_b(cplx a, cplx b);
cplx ratio_a(cplx a, cplx b);

// s = x/4 - ab ln(x/4)
cplx asym_phase(double x, cplx ab);
// F1 = a e^{2is} + b e^{-2is},  F2 = a e^{2is} - b e^{-2is}
cplx asym_f1(double x, cplx a, cplx b);
cplx asym_f2(double x, cplx a, cplx b);

// y ~ -1 + 4 x^{-1/2} F1 + 4 x^{-1} [2 theta - 1 - 2 F1^2]
cplx asym_model_y(double x, cplx a, cplx b, double theta);
// v ~ -x/8 - (i/4) x^{1/2} F2 + (1/2)[F1^2 - theta]
cplx asym_model_v(double x, cplx a, cplx b, double theta);

}  // namespace pv
