#pragma once

#include <vector>

#include "pv/connect.hpp"
#include "pv/models.hpp"
#include "pv/ode.hpp"

namespace pv {

struct IntegratorConfig {
  double x0 = 1e-3;
  double x_max = 600.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int series_order = 8;
  // Fine enough for the 9-point residual check through the transient near x ~ 2.
  double sample_step = PI / 64;

  void validate() const;
};

struct IntegrationReport {
  OdeStats ode;
  // Largest |y'' - pv_rhs| / max(1, |y''|) over samples with a full stencil,
  // y'' taken from the 9-point difference of the sampled y'.
  double max_pv_residual = 0.0;
};

// Largest accepted a posteriori residual.
inline constexpr double kPvResidualBound = 1e-6;

// Samples at x0 and every multiple of sample_step in (x0, x_max], plus x_max.
std::vector<double> sample_grid(const IntegratorConfig& cfg);

// Throws inadmissible, IntegrationAbort (singular_state / step_underflow, with
// the last good x), or non_convergence if the residual check fails.
Trajectory integrate(const Params& p, const IntegratorConfig& cfg, IntegrationReport* report = nullptr);

struct FitWindow {
  double x_lo;
  double x_hi;

  void validate() const;
};

// [fraction * x_max, x_max]
FitWindow window_from_fraction(double x_max, double fraction);

struct AsymptoticFit {
  cplx a = 0.0;
  cplx b = 0.0;
  cplx ab = 0.0;
  double rms_residual = 0.0;
  FitWindow window{0.0, 0.0};
  int iterations = 0;
  bool degenerate = false;  // amplitudes below the noise floor, reported as zero
};

// Below this max |x^{1/2}(y+1)/4| over the window the oscillation is treated as absent.
inline constexpr double kAmplitudeFloor = 1e-6;
// Relative amplitude below which one of the two components counts as absent.
inline constexpr double kComponentFloor = 1e-4;

// ab from the drift of the demodulated e^{2is} component. Throws degenerate if
// either component is below the floors.
cplx estimate_ab_phase(const Trajectory& traj, const FitWindow& w);

// Alternating linear least squares in (a, b) with ab frozen, then Gauss-Newton
// on (a, b) jointly with ab = a b inside the phase.
AsymptoticFit fit_ab(const Trajectory& traj, const FitWindow& w, cplx ab_init);

// RMS over the window of (v - asym_model_v) / x^{1/2}.
double cross_check_v(const Trajectory& traj, const AsymptoticFit& fit, double theta, const FitWindow& w);

}  // namespace pv
