#include <algorithm>
#include <cmath>
#include <string>

#include "pv/ode.hpp"

namespace pv {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;  // step may shrink to 1/5 ...
constexpr double kFacMax = 10.0;  // ... or grow by 10

Vec2 axpy(const Vec2& u, double h, std::initializer_list<std::pair<double, const Vec2*>> terms) {
  Vec2 r = u;
  for (const auto& [c, k] : terms)
    for (int i = 0; i < 2; ++i) r[i] += h * c * (*k)[i];
  return r;
}

double scaled_norm(const Vec2& err, const Vec2& u_old, const Vec2& u_new, const OdeOptions& o) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double parts[2][3] = {{err[i].real(), u_old[i].real(), u_new[i].real()},
                                {err[i].imag(), u_old[i].imag(), u_new[i].imag()}};
    for (const auto& p : parts) {
      const double sk = o.abs_tol + o.rel_tol * std::max(std::fabs(p[1]), std::fabs(p[2]));
      sum += (p[0] / sk) * (p[0] / sk);
    }
  }
  return std::sqrt(sum / 4.0);
}

}  // namespace

void integrate_ode(const OdeRhs& rhs, const Vec2& u0, const std::vector<double>& grid, const OdeOptions& opt,
                   const OdeSink& sink, OdeStats* stats) {
  if (grid.empty()) throw Error(ErrorKind::invalid_argument, "integrate_ode: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::invalid_argument, "integrate_ode: grid not increasing");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw Error(ErrorKind::invalid_argument, "integrate_ode: tolerances must be positive");

  OdeStats local;
  OdeStats& st = stats ? *stats : local;
  double t = grid.front();
  Vec2 u = u0;

  auto eval = [&](double tt, const Vec2& uu) {
    try {
      return rhs(tt, uu);
    } catch (const IntegrationAbort&) {
      throw;
    } catch (const Error& e) {
      throw IntegrationAbort(e.kind(), std::string(e.what()) + " (last accepted t = " + std::to_string(t) + ")", t);
    }
  };

  sink(t, u);
  Vec2 k1 = eval(t, u);

  double h = opt.h_init;
  if (!(h > 0.0)) {
    const Vec2 zero{};
    const double d0 = scaled_norm(u, zero, zero, opt);
    const double d1 = scaled_norm(k1, zero, zero, opt);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  double fac_old = 1e-4;

  for (std::size_t next = 1; next < grid.size(); ++next) {
    const double target = grid[next];
    bool landed = false;
    while (!landed) {
      if (++st.steps > opt.max_steps)
        throw IntegrationAbort(ErrorKind::non_convergence, "integrate_ode: max_steps exceeded", t);
      double hs = h;
      if (t + hs >= target - 1e-13 * std::fabs(target)) {
        hs = target - t;
        landed = true;
      }
      if (hs < 1e-14 * std::max(1.0, std::fabs(t)))
        throw IntegrationAbort(ErrorKind::step_underflow, "integrate_ode: step size underflow", t);

      const Vec2 k2 = eval(t + c2 * hs, axpy(u, hs, {{a21, &k1}}));
      const Vec2 k3 = eval(t + c3 * hs, axpy(u, hs, {{a31, &k1}, {a32, &k2}}));
      const Vec2 k4 = eval(t + c4 * hs, axpy(u, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const Vec2 k5 = eval(t + c5 * hs, axpy(u, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const Vec2 k6 = eval(t + hs, axpy(u, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const Vec2 un = axpy(u, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
      const Vec2 k7 = eval(t + hs, un);
      Vec2 err{};
      err = axpy(err, hs, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
      const double en = scaled_norm(err, u, un, opt);
      if (!std::isfinite(en))
        throw IntegrationAbort(ErrorKind::singular_state, "integrate_ode: non-finite state", t);

      const double fac11 = std::pow(en, kExpo);
      if (en <= 1.0) {
        double fac = fac11 / std::pow(fac_old, kBeta);
        fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
        fac_old = std::max(en, 1e-4);
        t = landed ? target : t + hs;
        u = un;
        k1 = k7;
        st.error_estimate += std::abs(err[0]);
        // A step shortened to hit the grid keeps the previous proposal.
        if (!(landed && hs < h)) h = hs / fac;
      } else {
        ++st.rejected;
        landed = false;
        h = hs / std::min(1.0 / kFacMin, fac11 / kSafe);
      }
    }
    sink(t, u);
  }
}

}  // namespace pv
