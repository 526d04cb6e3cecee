#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pv/common.hpp"

namespace pv {

struct Params {
  double theta = 0.5;
  cplx rho = 0.0;

  // Throws invalid_argument if theta is an integer or anything is non-finite.
  void validate() const;
};

struct State {
  cplx y;
  cplx yp;
};

// Singular-locus guards shared by the right-hand side and the integrator.
inline constexpr double kGuardY0 = 1e-12;
inline constexpr double kGuardY1 = 1e-10;
inline constexpr double kGuardYMax = 1e8;

// Throws singular_state if s.y is within a guard of {0, 1} or above kGuardYMax.
void check_state(const State& s);

// d2y/dx2 of the PV equation
//   y'' = (1/(2y) + 1/(y-1)) y'^2 - y'/x + (1-2 theta) y/x - y(y+1)/(2(y-1)).
cplx pv_rhs(double x, const State& s, double theta);

// d2w/dt2 of the PIII equation
//   w'' = w'^2/w - w'/t + (1-2 theta)(w^2-1)/t + w^3 - 1/w.
cplx piii_rhs(double t, cplx w, cplx wp, double theta);

struct PvPoint {
  cplx y;
  double x;
};
struct PiiiPoint {
  cplx w;
  double t;
};

// y = ((w-1)/(w+1))^2, x = 4t.
PvPoint pv_from_piii(cplx w, double t);

// The inverse map is 2-to-1; `principal` uses the principal sqrt(y), `negated` its negative.
enum class SqrtBranch { principal, negated };
// w = (1 + sqrt y)/(1 - sqrt y), t = x/4.
PiiiPoint piii_from_pv(cplx y, double x, SqrtBranch branch = SqrtBranch::principal);

// psi'' = 2 sin 2psi - psi'/t  (w = e^{i psi}, theta = 1/2).
double sine_gordon_rhs(double t, double psi, double psip);
// (t phi')' = 2t sin 2phi - 2 sin phi, returned as phi''  (w = -e^{i phi}, theta = 0).
double harmonic_form_rhs(double t, double phi, double phip);

struct SeriesExpansion {
  double x0 = 0.0;
  std::vector<cplx> coeffs;  // y_0 ... y_N
  int order = 0;

  cplx value(double x) const;
  cplx derivative(double x) const;
  State state(double x) const { return {value(x), derivative(x)}; }
};

inline constexpr int kMinSeriesOrder = 2;
inline constexpr int kMaxSeriesOrder = 12;

// Power series of the solution regular at x = 0 with y(0) = kappa. Coefficients
// are found by order matching on the polynomial form of the equation, carried
// out in binary128 and rounded.
SeriesExpansion origin_series(const Params& p, int order);

// x (y'' - pv_rhs) for the order-N truncation at x, evaluated entirely in
// binary128 so that the O(x^N) behaviour is visible far below double rounding.
cplx series_residual(const Params& p, int order, double x);

// v = [x y - x y' + 2 theta (y-1)] / (2 (y-1)^2).
cplx v_from_y(double x, const State& s, double theta);

struct Sample {
  double x;
  cplx y;
  cplx yp;
  cplx v;
};

struct Trajectory {
  Params params;
  std::vector<Sample> samples;
};

// CSV with header x,y_re,y_im,yp_re,yp_im,v_re,v_im.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
Trajectory read_trajectory_csv(std::istream& is, const Params& params);

}  // namespace pv
