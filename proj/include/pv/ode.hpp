#pragma once

#include <array>
#include <functional>
#include <vector>

#include "pv/common.hpp"

namespace pv {

// Second-order scalar complex ODE written as a first-order system (u, u').
using Vec2 = std::array<cplx, 2>;
using OdeRhs = std::function<Vec2(double, const Vec2&)>;
using OdeSink = std::function<void(double, const Vec2&)>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 0.0;  // 0 picks a starting step from the derivative scale
  long max_steps = 50'000'000;
};

struct OdeStats {
  long steps = 0;
  long rejected = 0;
  // Sum over accepted steps of the local error estimate of u (absolute).
  double error_estimate = 0.0;
};

// Dormand-Prince 5(4) with PI step control. Steps are shortened to land exactly
// on every grid point; grid must be strictly increasing and grid[0] is the
// initial point. sink is called at each grid point including the first.
// pv::Error thrown by rhs (and step underflow) are rethrown as IntegrationAbort
// carrying the last accepted t.
void integrate_ode(const OdeRhs& rhs, const Vec2& u0, const std::vector<double>& grid, const OdeOptions& opt,
                   const OdeSink& sink, OdeStats* stats = nullptr);

// Weights of the 9-point central difference for the first and second derivative
// on a uniform grid (order 8).
inline constexpr std::array<double, 9> kCentralD1 = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                                     4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
inline constexpr std::array<double, 9> kCentralD2 = {-1.0 / 560, 8.0 / 315,  -1.0 / 5, 8.0 / 5, -205.0 / 72,
                                                     8.0 / 5,    -1.0 / 5,   8.0 / 315, -1.0 / 560};

}  // namespace pv
