#include <cmath>
#include <string>

#include "pv/extract.hpp"

namespace pv {

void IntegratorConfig::validate() const {
  if (!(x0 > 0.0 && x0 <= 0.01)) throw Error(ErrorKind::invalid_argument, "IntegratorConfig: x0 must lie in (0, 0.01]");
  if (!(x_max >= 100.0) || !std::isfinite(x_max))
    throw Error(ErrorKind::invalid_argument, "IntegratorConfig: x_max must be >= 100");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-8))
    throw Error(ErrorKind::invalid_argument, "IntegratorConfig: rel_tol must lie in (0, 1e-8]");
  if (!(abs_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "IntegratorConfig: abs_tol must be positive");
  if (series_order < kMinSeriesOrder || series_order > kMaxSeriesOrder)
    throw Error(ErrorKind::invalid_argument, "IntegratorConfig: series_order must lie in [2, 12]");
  if (!(sample_step > 0.0 && sample_step <= PI / 8 + 1e-15))
    throw Error(ErrorKind::invalid_argument, "IntegratorConfig: sample_step must lie in (0, pi/8]");
}

std::vector<double> sample_grid(const IntegratorConfig& cfg) {
  std::vector<double> g{cfg.x0};
  for (long k = static_cast<long>(std::floor(cfg.x0 / cfg.sample_step)) + 1;; ++k) {
    const double x = static_cast<double>(k) * cfg.sample_step;
    if (x >= cfg.x_max - 1e-9 * cfg.sample_step) break;
    if (x > g.back()) g.push_back(x);
  }
  g.push_back(cfg.x_max);
  return g;
}

Trajectory integrate(const Params& p, const IntegratorConfig& cfg, IntegrationReport* report) {
  cfg.validate();
  p.validate();
  if (!admissible(p)) throw Error(ErrorKind::inadmissible, "integrate: params are not admissible");
  const SeriesExpansion series = origin_series(p, cfg.series_order);
  const State s0 = series.state(cfg.x0);
  const double theta = p.theta;

  const OdeRhs rhs = [theta](double x, const Vec2& u) -> Vec2 { return {u[1], pv_rhs(x, {u[0], u[1]}, theta)}; };
  Trajectory traj{p, {}};
  const auto grid = sample_grid(cfg);
  traj.samples.reserve(grid.size());
  OdeOptions opt;
  opt.rel_tol = cfg.rel_tol;
  opt.abs_tol = cfg.abs_tol;
  IntegrationReport local;
  IntegrationReport& rep = report ? *report : local;
  integrate_ode(
      rhs, {s0.y, s0.yp}, grid, opt,
      [&](double x, const Vec2& u) { traj.samples.push_back({x, u[0], u[1], v_from_y(x, {u[0], u[1]}, theta)}); },
      &rep.ode);

  // The uniform part of the grid is indices 1 .. n-2 (x0 and x_max may be off-step).
  const auto& sm = traj.samples;
  const std::size_t n = sm.size();
  const double h = cfg.sample_step;
  double worst = 0.0;
  double worst_x = 0.0;
  for (std::size_t i = 5; i + 5 < n; ++i) {
    cplx d = 0.0;
    for (int j = 0; j < 9; ++j) d += kCentralD1[j] * sm[i - 4 + j].yp;
    d /= h;
    const cplx f = pv_rhs(sm[i].x, {sm[i].y, sm[i].yp}, theta);
    const double r = std::abs(d - f) / std::max(1.0, std::abs(f));
    if (r > worst) {
      worst = r;
      worst_x = sm[i].x;
    }
  }
  rep.max_pv_residual = worst;
  if (worst > kPvResidualBound)
    throw Error(ErrorKind::non_convergence,
                "integrate: a posteriori PV residual " + std::to_string(worst) + " at x = " + std::to_string(worst_x));
  return traj;
}

}  // namespace pv
