#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "pv/uniform.hpp"

namespace pv {

UniformFrame UniformFrame::make(double x, cplx a, cplx b, double theta, bool leading_only) {
  if (!(x >= 50.0) || !std::isfinite(x)) throw Error(ErrorKind::invalid_argument, "UniformFrame: x must be >= 50");
  if (!finite(a) || !finite(b) || !std::isfinite(theta))
    throw Error(ErrorKind::invalid_argument, "UniformFrame: non-finite a, b or theta");
  UniformFrame f;
  f.x = x;
  f.a = a;
  f.b = b;
  f.ab = a * b;
  f.theta = theta;
  f.leading_only = leading_only;
  f.s = x / 4.0 - f.ab * std::log(x / 4.0);
  const cplx e = std::exp(2.0 * I * f.s);
  f.f1 = a * e + b / e;
  f.f2 = a * e - b / e;
  return f;
}

namespace {

struct HVal {
  cplx h, hp;
};

HVal eval_h(cplx l, const UniformFrame& f) {
  const double sx = std::sqrt(f.x);
  const cplx d = l - 0.5;
  return {I * sx * d * d + l * f.f1 - f.f2 / 2.0, 2.0 * I * sx * d + f.f1};
}

void check_lambda(cplx l, const UniformFrame& f, HVal* hv) {
  if (!finite(l)) throw Error(ErrorKind::invalid_argument, "eval_Q: non-finite lambda");
  if (std::abs(l) < 1e-300 || std::abs(l - 1.0) < 1e-300) throw Error(ErrorKind::pole, "eval_Q: lambda at 0 or 1");
  if (f.leading_only) return;
  *hv = eval_h(l, f);
  if (std::abs(hv->h) <= 1e-14 * (std::sqrt(f.x) * std::norm(l - 0.5) + std::abs(l * f.f1) + std::abs(f.f2)))
    throw Error(ErrorKind::pole, "eval_Q: lambda at a zero of H");
}

}  // namespace

cplx eval_Q(cplx l, const UniformFrame& f) {
  HVal hv{};
  check_lambda(l, f, &hv);
  const cplx d = l * (l - 1.0);
  const cplx q0 = -(2.0 * l - 1.0) * (2.0 * l - 1.0) / (16.0 * d);
  if (f.leading_only) return q0;
  const cplx g = hv.hp / hv.h;
  const cplx q1 = (4.0 * f.ab + I - I * (l - 0.5) * g) / (4.0 * d);
  const cplx q2 = (f.f1 + f.f2 - (l - 0.5) * f.f2 * g) / (2.0 * d);
  return q0 + q1 / f.x - q2 / std::pow(f.x, 1.5);
}

cplx eval_Q_prime(cplx l, const UniformFrame& f) {
  HVal hv{};
  check_lambda(l, f, &hv);
  const cplx d = l * (l - 1.0);
  const cplx dp = 2.0 * l - 1.0;
  const cplx q0p = (2.0 * l - 1.0) / (16.0 * d * d);
  if (f.leading_only) return q0p;
  const cplx g = hv.hp / hv.h;
  const cplx gp = 2.0 * I * std::sqrt(f.x) / hv.h - g * g;
  const cplx n1 = 4.0 * f.ab + I - I * (l - 0.5) * g;
  const cplx n1p = -I * (g + (l - 0.5) * gp);
  const cplx n2 = f.f1 + f.f2 - (l - 0.5) * f.f2 * g;
  const cplx n2p = -f.f2 * (g + (l - 0.5) * gp);
  const cplx q1p = (n1p * d - n1 * dp) / (4.0 * d * d);
  const cplx q2p = (n2p * d - n2 * dp) / (2.0 * d * d);
  return q0p + q1p / f.x - q2p / std::pow(f.x, 1.5);
}

std::vector<cplx> h_zeros(const UniformFrame& f) {
  if (f.leading_only) return {};
  const double sx = std::sqrt(f.x);
  const cplx A = I * sx, B = -I * sx + f.f1, C = I * sx / 4.0 - f.f2 / 2.0;
  const cplx disc = std::sqrt(B * B - 4.0 * A * C);
  // Avoid cancellation in the smaller root.
  const cplx q = -0.5 * (B + (std::real(std::conj(B) * disc) >= 0 ? disc : -disc));
  return {q / A, C / q};
}

std::pair<cplx, cplx> turning_point_seeds(const UniformFrame& f) {
  const cplx beta = std::sqrt(4.0 * f.ab + I) / std::sqrt(f.x);
  return {0.5 - beta, 0.5 + beta};
}

namespace {

cplx newton_root(cplx l, const UniformFrame& f) {
  for (int it = 0; it < 60; ++it) {
    const cplx dl = eval_Q(l, f) / eval_Q_prime(l, f);
    l -= dl;
    if (!finite(l)) break;
    if (std::abs(dl) <= 1e-15 * std::abs(l)) return l;
  }
  if (finite(l) && std::abs(eval_Q(l, f)) * f.x <= 1e-8) return l;
  throw Error(ErrorKind::non_convergence, "turning_points: Newton did not converge");
}

}  // namespace

TurningData turning_points(const UniformFrame& f) {
  TurningData td;
  if (f.leading_only) {
    td.lambda1 = td.lambda2 = 0.5;
    td.alpha_sq = td.alpha = 0.0;
    td.nu = -0.5;
    return td;
  }
  const auto [s1, s2] = turning_point_seeds(f);
  td.lambda1 = newton_root(s1, f);
  td.lambda2 = newton_root(s2, f);
  for (cplx l : {td.lambda1, td.lambda2})
    if (std::abs(eval_Q(l, f)) * f.x > 1e-8)
      throw Error(ErrorKind::non_convergence, "turning_points: residual above 1e-8");
  if (std::abs(td.lambda1 - td.lambda2) <= 1e-3 * std::abs(s1 - s2))
    throw Error(ErrorKind::non_convergence, "turning_points: both seeds reached the same root");
  td.alpha_sq = alpha_via_integral(f, td.lambda1, td.lambda2);
  cplx al = std::sqrt(td.alpha_sq);
  if (std::abs(-al - (td.lambda2 - 0.5)) < std::abs(al - (td.lambda2 - 0.5))) al = -al;
  td.alpha = al;
  td.nu = -0.5 + 0.5 * I * f.x * td.alpha_sq;
  return td;
}

namespace {

// Ratio Q / M with M = (l - l1)(l - l2) / (4 l (1 - l)), which tends to 1 away from the pair.
cplx q_over_m(cplx l, const UniformFrame& f, cplx l1, cplx l2) {
  return eval_Q(l, f) * 4.0 * l * (1.0 - l) / ((l - l1) * (l - l2));
}

}  // namespace

cplx sqrt_Q(cplx l, const UniformFrame& f, const TurningData& td) {
  if (l == td.lambda1 || l == td.lambda2) return 0.0;
  const cplx m = 0.5 * (td.lambda1 + td.lambda2), h = 0.5 * (td.lambda2 - td.lambda1);
  const cplx d = l - m;
  const cplx ref = d * std::sqrt(1.0 - h * h / (d * d)) / (2.0 * std::sqrt(l * (1.0 - l)));
  if (f.leading_only) return ref;
  return ref * std::sqrt(q_over_m(l, f, td.lambda1, td.lambda2));
}

cplx alpha_via_integral(const UniformFrame& f, cplx l1, cplx l2, const QuadratureOptions& q) {
  if (f.leading_only) return 0.0;
  const cplx m = 0.5 * (l1 + l2), h = 0.5 * (l2 - l1);
  const auto g = [&](double phi) -> cplx {
    const double u = std::sin(phi), c = std::cos(phi);
    if (c <= 0.0) return 0.0;
    const cplx l = m + u * h;
    // Upper-edge value of Q^{1/2} at l, times d lambda / d phi.
    const cplx edge = I * h * c / (2.0 * std::sqrt(l * (1.0 - l))) * std::sqrt(q_over_m(l, f, l1, l2));
    return edge * c * h;
  };
  const cplx j = integrate_gk(g, -PI / 2, 0.0, q) + integrate_gk(g, 0.0, PI / 2, q);
  return 2.0 / (PI * I) * j;
}

double stokes_distance(cplx l) { return std::abs(std::real(std::sqrt(l * (l - 1.0)))); }

namespace {

constexpr std::array<double, 8> kXk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights on the odd Kronrod nodes kXk[1], kXk[3], kXk[5], kXk[7].
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkOut {
  cplx k, g;
};

GkOut gk15(const std::function<cplx(double)>& fn, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  cplx k = kWk[7] * fn(c), g = kWg[3] * fn(c);
  for (int i = 0; i < 7; ++i) {
    const cplx s = fn(c - r * kXk[i]) + fn(c + r * kXk[i]);
    k += kWk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  return {k * r, g * r};
}

}  // namespace

cplx integrate_gk(const std::function<cplx(double)>& g, double a, double b, const QuadratureOptions& q) {
  if (!(q.rel_tol > 0.0) || q.max_depth < 1) throw Error(ErrorKind::invalid_argument, "integrate_gk: bad options");
  if (a == b) return 0.0;
  // Global bisection: always split the panel with the largest error estimate.
  struct Panel {
    double a, b;
    cplx k;
    double err;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  const double eps = std::numeric_limits<double>::epsilon();
  const auto make = [&](double lo, double hi, int depth) {
    const GkOut o = gk15(g, lo, hi);
    if (!finite(o.k)) throw Error(ErrorKind::non_convergence, "integrate_gk: non-finite integrand");
    // Differences at the rounding level are not resolvable.
    const double err = std::abs(o.k - o.g) <= 50.0 * eps * std::abs(o.k) ? 0.0 : std::abs(o.k - o.g);
    return Panel{lo, hi, o.k, err, depth};
  };
  std::priority_queue<Panel> heap;
  for (int i = 0; i < 8; ++i) heap.push(make(a + (b - a) * i / 8, a + (b - a) * (i + 1) / 8, 0));
  for (int it = 0;; ++it) {
    cplx total = 0.0;
    double err = 0.0, mag = 0.0;
    std::priority_queue<Panel> copy = heap;
    while (!copy.empty()) {
      total += copy.top().k;
      err += copy.top().err;
      mag += std::abs(copy.top().k);
      copy.pop();
    }
    if (err <= q.rel_tol * std::max(mag, 1e-300)) return total;
    const Panel worst = heap.top();
    if (worst.depth >= q.max_depth || it > 4000)
      throw Error(ErrorKind::non_convergence, "integrate_gk: subdivision limit reached");
    heap.pop();
    const double c = 0.5 * (worst.a + worst.b);
    heap.push(make(worst.a, c, worst.depth + 1));
    heap.push(make(c, worst.b, worst.depth + 1));
  }
}

}  // namespace pv
