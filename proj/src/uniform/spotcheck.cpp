#include <cmath>

#include "pv/ode.hpp"
#include "pv/specfun.hpp"
#include "pv/uniform.hpp"

namespace pv {

std::vector<cplx> default_spot_segment() {
  std::vector<cplx> s;
  for (int j = 0; j < 16; ++j) s.push_back(cplx(0.5, 0.3 + 0.7 * j / 15.0));
  return s;
}

namespace {

struct BasisPair {
  cplx f[2];
  cplx fp[2];  // d/d lambda
};

}  // namespace

SpotcheckResult theorem21_spotcheck(const UniformFrame& f, const TurningData& td, const std::vector<cplx>& seg) {
  if (seg.size() < 2) throw Error(ErrorKind::invalid_argument, "theorem21_spotcheck: need at least two points");
  for (cplx l : seg)
    if (stokes_distance(l) > 1e-12)
      throw Error(ErrorKind::invalid_argument, "theorem21_spotcheck: point off the Stokes set");

  const ZetaTrack tr = zeta_along_path(f, td, seg);
  const double x = f.x;
  const cplx g[2] = {std::exp(I * PI / 4.0) * std::sqrt(2.0 * x), std::exp(-I * PI / 4.0) * std::sqrt(2.0 * x)};
  const cplx order[2] = {td.nu, -td.nu - 1.0};

  std::vector<BasisPair> basis;
  cplx p_prev = 0.0;
  for (std::size_t k = 0; k < seg.size(); ++k) {
    const cplx l = seg[k], z = tr.zeta[k];
    const cplx sq = sqrt_Q(l, f, td);
    const cplx w = td.alpha_sq == 0.0 ? z : z * std::sqrt(1.0 - td.alpha_sq / (z * z));
    const cplx zp = sq / w;
    cplx P = std::sqrt(w / sq);
    if (k > 0 && std::abs(P + p_prev) < std::abs(P - p_prev)) P = -P;  // keep the prefactor continuous
    p_prev = P;
    const cplx qp = eval_Q_prime(l, f);
    const cplx zpp = (qp / (2.0 * sq)) / w - sq * (z / w) * zp / (w * w);
    const cplx pp = -0.5 * P * zpp / zp;
    BasisPair b{};
    for (int i = 0; i < 2; ++i) {
      const DValue d = parabolic_cylinder_d_with_derivative(order[i], g[i] * z);
      b.f[i] = P * d.d;
      b.fp[i] = pp * d.d + P * d.dp * g[i] * zp;
    }
    basis.push_back(b);
  }

  const cplx c_ref[2] = {1.0, cplx(0.7, 0.3)};
  const BasisPair& b0 = basis.front();
  Vec2 u{c_ref[0] * b0.f[0] + c_ref[1] * b0.f[1], c_ref[0] * b0.fp[0] + c_ref[1] * b0.fp[1]};

  const cplx wr = b0.f[0] * b0.fp[1] - b0.f[1] * b0.fp[0];
  const double wscale = std::abs(b0.f[0] * b0.fp[1]) + std::abs(b0.f[1] * b0.fp[0]);
  if (!(std::abs(wr) >= 1e-12 * wscale))
    throw Error(ErrorKind::matching_singularity, "theorem21_spotcheck: basis Wronskian vanishes at the anchor");
  SpotcheckResult res{};
  res.c1 = (u[0] * b0.fp[1] - b0.f[1] * u[1]) / wr;
  res.c2 = (b0.f[0] * u[1] - u[0] * b0.fp[0]) / wr;

  OdeOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-14 * (std::abs(u[0]) + std::abs(u[1]) / x);
  double dev = 0.0;
  for (std::size_t k = 1; k < seg.size(); ++k) {
    const cplx l0 = seg[k - 1], d = seg[k] - seg[k - 1];
    const OdeRhs rhs = [&](double t, const Vec2& v) -> Vec2 {
      return {v[1] * d, -x * x * eval_Q(l0 + t * d, f) * v[0] * d};
    };
    integrate_ode(rhs, u, {0.0, 1.0}, opt, [&](double t, const Vec2& v) {
      if (t == 1.0) u = v;
    });
    const BasisPair& b = basis[k];
    const cplx t1 = res.c1 * b.f[0], t2 = res.c2 * b.f[1];
    dev = std::max(dev, std::abs(u[0] - t1 - t2) / (std::abs(t1) + std::abs(t2)));
  }
  res.max_deviation = dev;
  return res;
}

}  // namespace pv
