#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "pv/extract.hpp"

namespace pv {

namespace {

using MatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using VecC = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

constexpr int kMaxAlternations = 50;
constexpr double kAbTol = 1e-12;
constexpr int kMaxGaussNewton = 30;
constexpr double kRankTol = 1e-8;

struct WindowData {
  std::vector<double> x;
  std::vector<cplx> y;
  std::vector<cplx> yp;
  std::vector<cplx> v;
};

WindowData window_samples(const Trajectory& t, const FitWindow& w) {
  w.validate();
  if (t.samples.empty()) throw Error(ErrorKind::invalid_argument, "fit window: empty trajectory");
  const double eps = 1e-9 * w.x_hi;
  if (w.x_lo < t.samples.front().x - eps || w.x_hi > t.samples.back().x + eps)
    throw Error(ErrorKind::invalid_argument, "fit window lies outside the trajectory");
  WindowData d;
  for (const auto& s : t.samples) {
    if (s.x < w.x_lo - eps || s.x > w.x_hi + eps) continue;
    d.x.push_back(s.x);
    d.y.push_back(s.y);
    d.yp.push_back(s.yp);
    d.v.push_back(s.v);
  }
  if (d.x.size() < 16) throw Error(ErrorKind::invalid_argument, "fit window holds fewer than 16 samples");
  return d;
}

double envelope(const WindowData& d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) m = std::max(m, std::sqrt(d.x[i]) * std::abs(d.y[i] + 1.0) / 4.0);
  return m;
}

// y on a grid whose step divides 4 pi exactly; cubic Hermite from (y, y') when
// the sample grid does not already have that property.
void uniform_period_grid(const WindowData& d, std::vector<double>& xs, std::vector<cplx>& ys, int& per_period) {
  const double period = 4.0 * PI;
  double h = d.x[1] - d.x[0];
  for (std::size_t i = 2; i < d.x.size(); ++i) h = std::min(h, d.x[i] - d.x[i - 1]);
  const double m = period / h;
  bool uniform = std::fabs(m - std::round(m)) < 1e-9 * m;
  for (std::size_t i = 1; uniform && i < d.x.size(); ++i)
    uniform = std::fabs(d.x[i] - d.x[i - 1] - h) < 1e-9 * h;
  if (uniform) {
    xs = d.x;
    ys = d.y;
    per_period = static_cast<int>(std::round(m));
    return;
  }
  per_period = static_cast<int>(std::ceil(m));
  const double hq = period / per_period;
  xs.clear();
  ys.clear();
  std::size_t j = 0;
  for (double x = d.x.front(); x <= d.x.back(); x += hq) {
    while (j + 2 < d.x.size() && d.x[j + 1] < x) ++j;
    const double x0 = d.x[j], x1 = d.x[j + 1], dx = x1 - x0;
    const double t = (x - x0) / dx;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    xs.push_back(x);
    ys.push_back(h00 * d.y[j] + h10 * dx * d.yp[j] + h01 * d.y[j + 1] + h11 * dx * d.yp[j + 1]);
  }
}

// Mean over each run of m consecutive samples, i.e. over exactly one period 4 pi.
void boxcar(const std::vector<double>& xs, const std::vector<cplx>& zs, int m, std::vector<double>& xc,
            std::vector<cplx>& zc) {
  xc.clear();
  zc.clear();
  if (static_cast<int>(zs.size()) < m) return;
  cplx acc = 0.0;
  for (int i = 0; i < m; ++i) acc += zs[i];
  for (std::size_t i = 0;; ++i) {
    xc.push_back(0.5 * (xs[i] + xs[i + m - 1]));
    zc.push_back(acc / static_cast<double>(m));
    if (i + m >= zs.size()) break;
    acc += zs[i + m] - zs[i];
  }
}

double rms_of(const WindowData& d, cplx a, cplx b, double theta) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) sum += std::norm(d.y[i] - asym_model_y(d.x[i], a, b, theta));
  return std::sqrt(sum / static_cast<double>(d.x.size()));
}

}  // namespace

void FitWindow::validate() const {
  if (!(x_lo > 0.0) || !(x_hi > x_lo)) throw Error(ErrorKind::invalid_argument, "FitWindow: need 0 < x_lo < x_hi");
  if (x_hi / x_lo < 1.5 - 1e-12) throw Error(ErrorKind::invalid_argument, "FitWindow: x_hi/x_lo must be >= 1.5");
}

FitWindow window_from_fraction(double x_max, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw Error(ErrorKind::invalid_argument, "fit window fraction must lie in (0, 1)");
  FitWindow w{fraction * x_max, x_max};
  w.validate();
  return w;
}

cplx estimate_ab_phase(const Trajectory& traj, const FitWindow& w) {
  const WindowData d = window_samples(traj, w);
  const double env = envelope(d);
  if (!(env >= kAmplitudeFloor))
    throw Error(ErrorKind::degenerate, "estimate_ab_phase: oscillation amplitude below the noise floor");

  std::vector<double> xs;
  std::vector<cplx> ys;
  int m = 0;
  uniform_period_grid(d, xs, ys, m);
  std::vector<cplx> za(xs.size()), zb(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const cplx g = std::sqrt(xs[i]) * (ys[i] + 1.0) / 4.0;
    const cplx rot = std::exp(-0.5 * I * xs[i]);
    za[i] = g * rot;
    zb[i] = g / rot;
  }
  std::vector<double> xc, xcb;
  std::vector<cplx> ac, bc;
  boxcar(xs, za, m, xc, ac);
  boxcar(xs, zb, m, xcb, bc);
  if (xc.size() < 8) throw Error(ErrorKind::invalid_argument, "estimate_ab_phase: window shorter than a few periods");

  double amean = 0.0, bmean = 0.0;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    amean += std::abs(ac[i]);
    bmean += std::abs(bc[i]);
  }
  amean /= static_cast<double>(ac.size());
  bmean /= static_cast<double>(bc.size());
  if (amean < kComponentFloor * env || bmean < kComponentFloor * env)
    throw Error(ErrorKind::degenerate, "estimate_ab_phase: one oscillation component is absent");

  // log A = log a - 2i ab ln(x/4): regress the unwrapped complex log on {1, ln(x/4)}.
  const std::size_t n = ac.size();
  double sl = 0, sll = 0;
  cplx sz = 0, slz = 0;
  double prev_arg = std::arg(ac[0]), unwrap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double arg = std::arg(ac[i]);
    double jump = arg - prev_arg;
    if (jump > PI) unwrap -= 2 * PI;
    if (jump < -PI) unwrap += 2 * PI;
    prev_arg = arg;
    const cplx z{std::log(std::abs(ac[i])), arg + unwrap};
    const double l = std::log(xc[i] / 4.0);
    sl += l;
    sll += l * l;
    sz += z;
    slz += l * z;
  }
  const double nn = static_cast<double>(n);
  const double den = nn * sll - sl * sl;
  if (!(den > 0.0)) throw Error(ErrorKind::rank_deficient, "estimate_ab_phase: no ln x leverage in the window");
  const cplx slope = (nn * slz - sl * sz) / den;
  return 0.5 * I * slope;
}

AsymptoticFit fit_ab(const Trajectory& traj, const FitWindow& w, cplx ab_init) {
  if (!finite(ab_init)) throw Error(ErrorKind::invalid_argument, "fit_ab: ab_init must be finite");
  const WindowData d = window_samples(traj, w);
  const double theta = traj.params.theta;
  AsymptoticFit fit;
  fit.window = w;

  if (!(envelope(d) >= kAmplitudeFloor)) {
    fit.degenerate = true;
    fit.rms_residual = rms_of(d, 0.0, 0.0, theta);
    return fit;
  }

  const std::size_t n = d.x.size();
  std::vector<cplx> f1(n, 0.0);
  cplx a = 0.0, b = 0.0, ab = ab_init;
  bool converged = false;
  int it = 0;
  while (it < kMaxAlternations) {
    ++it;
    MatC A(n, 2);
    VecC r(n);
    std::vector<cplx> e(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = d.x[i];
      e[i] = std::exp(2.0 * I * asym_phase(x, ab));
      const double amp = 4.0 / std::sqrt(x);
      A(i, 0) = amp * e[i];
      A(i, 1) = amp / e[i];
      r(i) = d.y[i] + 1.0 - 4.0 * (2.0 * theta - 1.0 - 2.0 * f1[i] * f1[i]) / x;
    }
    if (it == 1) {
      // Conditioning of the column-normalized basis.
      MatC An = A;
      for (int c = 0; c < 2; ++c) An.col(c) /= An.col(c).norm();
      const Eigen::JacobiSVD<MatC> svd(An);
      const auto& sv = svd.singularValues();
      if (!(sv(1) > kRankTol * sv(0)))
        throw Error(ErrorKind::rank_deficient, "fit_ab: e^{2is} and e^{-2is} are indistinguishable over the window");
    }
    const VecC sol = A.colPivHouseholderQr().solve(r);
    a = sol(0);
    b = sol(1);
    for (std::size_t i = 0; i < n; ++i) f1[i] = a * e[i] + b / e[i];
    const cplx ab_new = a * b;
    const double change = std::abs(ab_new - ab);
    ab = ab_new;
    if (change <= kAbTol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorKind::non_convergence, "fit_ab: alternating scheme did not settle within 50 iterations");

  // Gauss-Newton on the holomorphic residual y - M(a, b), ab = a b inside s.
  double rms = rms_of(d, a, b, theta);
  for (int g = 0; g < kMaxGaussNewton; ++g) {
    ++it;
    MatC J(n, 2);
    VecC r(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = d.x[i];
      const double l = std::log(x / 4.0);
      const cplx e = std::exp(2.0 * I * asym_phase(x, a * b));
      const cplx F1 = a * e + b / e, F2 = a * e - b / e;
      const cplx dm = 4.0 / std::sqrt(x) - 16.0 * F1 / x;
      J(i, 0) = dm * (e - 2.0 * I * l * b * F2);
      J(i, 1) = dm * (1.0 / e - 2.0 * I * l * a * F2);
      r(i) = d.y[i] - asym_model_y(x, a, b, theta);
    }
    const VecC step = J.colPivHouseholderQr().solve(r);
    double lam = 1.0;
    bool improved = false;
    for (int k = 0; k < 10; ++k, lam *= 0.5) {
      const cplx an = a + lam * step(0), bn = b + lam * step(1);
      const double rn = rms_of(d, an, bn, theta);
      if (rn <= rms) {
        a = an;
        b = bn;
        rms = rn;
        improved = true;
        break;
      }
    }
    if (!improved || std::abs(step(0)) + std::abs(step(1)) <= 1e-14 * (std::abs(a) + std::abs(b))) break;
  }

  fit.a = a;
  fit.b = b;
  fit.ab = a * b;
  fit.rms_residual = rms;
  fit.iterations = it;
  return fit;
}

double cross_check_v(const Trajectory& traj, const AsymptoticFit& fit, double theta, const FitWindow& w) {
  const WindowData d = window_samples(traj, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const cplx dv = d.v[i] - asym_model_v(d.x[i], fit.a, fit.b, theta);
    sum += std::norm(dv) / d.x[i];
  }
  return std::sqrt(sum / static_cast<double>(d.x.size()));
}

}  // namespace pv
