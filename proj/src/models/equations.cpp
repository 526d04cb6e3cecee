#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pv/models.hpp"

namespace pv {

void Params::validate() const {
  if (!std::isfinite(theta) || !finite(rho))
    throw Error(ErrorKind::invalid_argument, "Params: non-finite theta or rho");
  if (theta == std::floor(theta))
    throw Error(ErrorKind::invalid_argument, "Params: theta must not be an integer");
}

void check_state(const State& s) {
  if (!finite(s.y) || !finite(s.yp)) throw Error(ErrorKind::singular_state, "non-finite state");
  if (std::abs(s.y) < kGuardY0) throw Error(ErrorKind::singular_state, "y reached the singular point 0");
  if (std::abs(s.y - 1.0) < kGuardY1) throw Error(ErrorKind::singular_state, "y reached the singular point 1");
  if (std::abs(s.y) > kGuardYMax) throw Error(ErrorKind::singular_state, "|y| exceeded the blow-up guard");
}

cplx pv_rhs(double x, const State& s, double theta) {
  if (!(x > 0.0)) throw Error(ErrorKind::invalid_argument, "pv_rhs: x must be positive");
  check_state(s);
  const cplx y = s.y, yp = s.yp;
  const cplx ym1 = y - 1.0;
  return (1.0 / (2.0 * y) + 1.0 / ym1) * yp * yp - yp / x + (1.0 - 2.0 * theta) * y / x -
         y * (y + 1.0) / (2.0 * ym1);
}

cplx piii_rhs(double t, cplx w, cplx wp, double theta) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "piii_rhs: t must be positive");
  if (w == 0.0) throw Error(ErrorKind::singular_state, "piii_rhs: w = 0");
  return wp * wp / w - wp / t + (1.0 - 2.0 * theta) * (w * w - 1.0) / t + w * w * w - 1.0 / w;
}

PvPoint pv_from_piii(cplx w, double t) {
  if (w == -1.0) throw Error(ErrorKind::pole, "pv_from_piii: w = -1");
  const cplx r = (w - 1.0) / (w + 1.0);
  return {r * r, 4.0 * t};
}

PiiiPoint piii_from_pv(cplx y, double x, SqrtBranch branch) {
  if (y == 1.0) throw Error(ErrorKind::pole, "piii_from_pv: y = 1");
  cplx r = std::sqrt(y);
  if (branch == SqrtBranch::negated) r = -r;
  return {(1.0 + r) / (1.0 - r), x / 4.0};
}

double sine_gordon_rhs(double t, double psi, double psip) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "sine_gordon_rhs: t must be positive");
  return 2.0 * std::sin(2.0 * psi) - psip / t;
}

double harmonic_form_rhs(double t, double phi, double phip) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "harmonic_form_rhs: t must be positive");
  return 2.0 * std::sin(2.0 * phi) - 2.0 * std::sin(phi) / t - phip / t;
}

cplx v_from_y(double x, const State& s, double theta) {
  const cplx ym1 = s.y - 1.0;
  if (ym1 == 0.0) throw Error(ErrorKind::pole, "v_from_y: y = 1");
  return (x * s.y - x * s.yp + 2.0 * theta * ym1) / (2.0 * ym1 * ym1);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "x,y_re,y_im,yp_re,yp_im,v_re,v_im\n";
  os << std::setprecision(17);
  for (const auto& s : t.samples) {
    os << s.x << ',' << s.y.real() << ',' << s.y.imag() << ',' << s.yp.real() << ',' << s.yp.imag() << ','
       << s.v.real() << ',' << s.v.imag() << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is, const Params& params) {
  Trajectory t{params, {}};
  std::string line;
  if (!std::getline(is, line) || line != "x,y_re,y_im,yp_re,yp_im,v_re,v_im")
    throw Error(ErrorKind::invalid_argument, "trajectory CSV: unexpected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double f[7];
    for (int i = 0; i < 7; ++i) {
      std::string cell;
      if (!std::getline(ls, cell, ',')) throw Error(ErrorKind::invalid_argument, "trajectory CSV: short row");
      f[i] = std::stod(cell);
    }
    if (!t.samples.empty() && !(f[0] > t.samples.back().x))
      throw Error(ErrorKind::invalid_argument, "trajectory CSV: x not strictly increasing");
    t.samples.push_back({f[0], {f[1], f[2]}, {f[3], f[4]}, {f[5], f[6]}});
  }
  return t;
}

}  // namespace pv
