#include <algorithm>
#include <cmath>
#include <vector>

#include "pv/uniform.hpp"

namespace pv {

namespace {

cplx w_of(cplx z, const TurningData& td) {
  if (td.alpha_sq == 0.0) return z;
  return z * std::sqrt(1.0 - td.alpha_sq / (z * z));
}

cplx f_of(cplx z, cplx L, const TurningData& td) {
  if (td.alpha_sq == 0.0) return 0.5 * z * z;
  return 0.5 * (z * w_of(z, td) - td.alpha_sq * L + td.alpha_sq * std::log(td.alpha));
}

// Newton for f(z) = target with ln(z + w) kept on the sheet nearest l_prev.
struct Solve {
  cplx z;
  cplx L;
};

Solve newton_zeta(cplx z, cplx target, const TurningData& td, const cplx* l_prev) {
  cplx L = 0.0;
  for (int it = 0; it < 60; ++it) {
    const cplx w = w_of(z, td);
    L = std::log(z + w);
    if (l_prev) L += 2.0 * PI * I * std::round((std::imag(*l_prev) - std::imag(L)) / (2.0 * PI));
    const cplx dz = (f_of(z, L, td) - target) / w;
    z -= dz;
    if (!finite(z)) break;
    if (std::abs(dz) <= 1e-14 * std::max(std::abs(z), 1e-3)) {
      L = std::log(z + w_of(z, td));
      if (l_prev) L += 2.0 * PI * I * std::round((std::imag(*l_prev) - std::imag(L)) / (2.0 * PI));
      return {z, L};
    }
  }
  throw Error(ErrorKind::non_convergence, "zeta: Newton inversion did not converge");
}

// Parameter values in (0, 1) where g(t), a principal-branch square root, jumps
// to its negative. Found by splitting until neighbouring values are either
// clearly continuous or a jump is pinned to ~1e-13. Values below floor sit at a
// turning point, where g is pure rounding noise and cannot flip.
template <class G>
void scan_flips(const G& g, double ta, double tb, cplx va, cplx vb, double floor, std::vector<double>& out) {
  const double scale = std::max(std::abs(va), std::abs(vb));
  if (scale <= floor) return;
  const double same = std::abs(va - vb), flipped = std::abs(va + vb);
  if (tb - ta < 1e-13) {
    if (flipped < same) out.push_back(0.5 * (ta + tb));
    return;
  }
  if (same <= 0.2 * scale) return;
  const double tm = 0.5 * (ta + tb);
  const cplx vm = g(tm);
  scan_flips(g, ta, tm, va, vm, floor, out);
  scan_flips(g, tm, tb, vm, vb, floor, out);
}

template <class G>
std::vector<double> branch_flips(const G& g) {
  constexpr int n = 64;
  std::vector<cplx> v(n + 1);
  double top = 0.0;
  for (int j = 0; j <= n; ++j) top = std::max(top, std::abs(v[j] = g(double(j) / n)));
  std::vector<double> out;
  for (int j = 1; j <= n; ++j) scan_flips(g, double(j - 1) / n, double(j) / n, v[j - 1], v[j], 1e-6 * top, out);
  return out;
}

// Each zero mu of H is a simple pole of Q with a zero nu of Q at distance
// ~x^{-3/4}; the segment between them is a cut of Q^{1/2}. Going once around
// the pair changes x * integral by pi to leading order, so which side a path
// takes does not matter modulo pi i / 2. Paths keep to the nu side, which is
// where a straight path already goes when the pair does not straddle it.
struct PoleZeroCut {
  cplx nu, mu;
};

std::vector<PoleZeroCut> pole_zero_cuts(const UniformFrame& f) {
  std::vector<PoleZeroCut> cuts;
  for (cplx mu : h_zeros(f)) {
    const double r0 = 1e-4 * std::max(std::abs(mu - 0.5), 1e-3);
    cplx nu;
    try {
      const cplx q0 = -(2.0 * mu - 1.0) * (2.0 * mu - 1.0) / (16.0 * mu * (mu - 1.0));
      const cplx res = (eval_Q(mu + r0, f) - q0) * r0;
      nu = mu - res / q0;
      for (int it = 0; it < 60; ++it) {
        const cplx dn = eval_Q(nu, f) / eval_Q_prime(nu, f);
        nu -= dn;
        if (std::abs(dn) <= 1e-15 * std::abs(nu)) break;
      }
    } catch (const Error&) {
      continue;
    }
    if (finite(nu) && std::abs(eval_Q(nu, f)) * f.x <= 1e-8 && std::abs(nu - mu) < 0.5 * std::abs(mu - 0.5))
      cuts.push_back({nu, mu});
  }
  return cuts;
}

// s in (0, 1) where the segment a -> b crosses the segment c -> d.
bool crossing(cplx a, cplx b, cplx c, cplx d, double& s) {
  const cplx u = b - a, v = d - c, w = c - a;
  const double den = u.real() * v.imag() - u.imag() * v.real();
  if (den == 0.0) return false;
  s = (w.real() * v.imag() - w.imag() * v.real()) / den;
  const double r = (w.real() * u.imag() - w.imag() * u.real()) / den;
  return s > 0.0 && s < 1.0 && r >= 0.0 && r <= 1.0;
}

// The leg a -> b as straight pieces, bent around the nu end of any cut it crosses.
std::vector<cplx> route_leg(cplx a, cplx b, const std::vector<PoleZeroCut>& cuts) {
  std::vector<std::pair<double, std::vector<cplx>>> bends;
  const cplx u = (b - a) / std::abs(b - a);
  for (const auto& c : cuts) {
    double s;
    if (!crossing(a, b, c.nu, c.mu, s)) continue;
    const cplx X = a + s * (b - a);
    const double r = 0.5 * std::abs(c.nu - c.mu);
    const cplx out = c.nu + r * (c.nu - c.mu) / std::abs(c.nu - c.mu);
    const double back = std::min(r, 0.5 * std::min(std::abs(X - a), std::abs(b - X)));
    bends.push_back({s, {X - back * u, out - back * u, out + back * u, X + back * u}});
  }
  std::sort(bends.begin(), bends.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<cplx> pts;
  for (const auto& bend : bends) pts.insert(pts.end(), bend.second.begin(), bend.second.end());
  pts.push_back(b);
  return pts;
}

// Cumulative integral of Q^{1/2} from lambda2 along a polyline; the first leg
// uses lambda = lambda2 + t^2 (p - lambda2) to absorb the square-root zero.
// Each straight piece is cut into sub equal parts; the callback sees every
// part end and is told when a leg of the caller's path ends. Q^{1/2} is
// continued along the path: where the principal value jumps sign the sign is
// carried over. Returns the sign relating the continued Q^{1/2} to sqrt_Q at
// the path end.
template <class Cb>
double walk(const UniformFrame& f, const TurningData& td, const std::vector<cplx>& path, Cb&& cb) {
  cplx prev = td.lambda2;
  cplx total = 0.0;
  double sign = 1.0;
  const auto cuts = pole_zero_cuts(f);
  bool first = true;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::vector<cplx> pieces = route_leg(prev, path[i], cuts);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const cplx p = pieces[k];
      const cplx d = p - prev;
      // Piece length grows with the distance from the pair.
      const int sub = 8 + static_cast<int>(std::ceil(std::abs(d) / (0.1 + 0.5 * std::abs(prev - 0.5))));
      const cplx start = prev;
      const auto lam = [&](double t) { return first ? start + t * t * d : start + t * d; };
      const auto root = [&](double t) { return sqrt_Q(lam(t), f, td); };
      const auto integrand = [&](double t) -> cplx { return root(t) * (first ? 2.0 * t * d : d); };
      const std::vector<double> flips = branch_flips(root);
      std::size_t next_flip = 0;
      for (int j = 1; j <= sub; ++j) {
        double t0 = double(j - 1) / sub;
        const double t1 = double(j) / sub;
        for (; next_flip < flips.size() && flips[next_flip] < t1; ++next_flip) {
          total += sign * integrate_gk(integrand, t0, flips[next_flip]);
          t0 = flips[next_flip];
          sign = -sign;
        }
        total += sign * integrate_gk(integrand, t0, t1);
        cb(lam(t1), total, j == sub && k + 1 == pieces.size(), i);
      }
      prev = p;
      first = false;
    }
  }
  return sign;
}

cplx reduce_half_pi_i(cplx r) { return r - I * (PI / 2) * std::round(std::imag(r) / (PI / 2)); }

}  // namespace

cplx zeta_map_lhs(cplx zeta, const TurningData& td, int k) {
  if (td.alpha_sq == 0.0) return 0.5 * zeta * zeta;
  const cplx L = std::log(zeta + w_of(zeta, td)) + 2.0 * PI * I * double(k);
  return f_of(zeta, L, td);
}

ZetaTrack zeta_along_path(const UniformFrame& f, const TurningData& td, const std::vector<cplx>& path) {
  if (path.empty()) throw Error(ErrorKind::invalid_argument, "zeta_along_path: empty path");
  const double excl = 1e-3 * std::abs(td.lambda1 - td.lambda2);
  for (cplx p : path)
    if (std::abs(p - td.lambda1) < excl || std::abs(p - td.lambda2) < excl)
      throw Error(ErrorKind::branch_ambiguity, "zeta: lambda too close to a turning point");

  // Local start: Q ~ Q'(l2)(l - l2) and w^2 ~ 2 alpha (z - alpha) give
  // z - alpha ~ (Q'(l2) / (2 alpha))^{1/3} (l - l2).
  cplx k = 1.0;
  if (td.alpha_sq != 0.0) {
    const cplx c = eval_Q_prime(td.lambda2, f) / (2.0 * td.alpha);
    const cplx r = std::pow(c, 1.0 / 3.0);
    double best = 1e300;
    for (int j = 0; j < 3; ++j) {
      const cplx cand = r * std::exp(2.0 * PI * I * double(j) / 3.0);
      if (std::abs(cand - 1.0) < best) {
        best = std::abs(cand - 1.0);
        k = cand;
      }
    }
  }

  ZetaTrack out;
  bool started = false;
  cplx z = 0.0, L = 0.0;
  walk(f, td, path, [&](cplx l, cplx total, bool leg_end, std::size_t) {
    const cplx seed = started ? z : td.alpha + k * (l - td.lambda2);
    const Solve s = newton_zeta(seed, total, td, started ? &L : nullptr);
    z = s.z;
    L = s.L;
    started = true;
    if (leg_end) {
      out.zeta.push_back(z);
      out.integral.push_back(total);
    }
  });
  return out;
}

cplx zeta_of_lambda(cplx lambda, const UniformFrame& f, const TurningData& td) {
  if (td.alpha_sq == 0.0 && lambda == td.lambda2) return 0.0;
  return zeta_along_path(f, td, {lambda}).zeta.back();
}

namespace {

cplx path_integral(const UniformFrame& f, const TurningData& td, const std::vector<cplx>& path,
                   double* end_sign = nullptr) {
  cplx last = 0.0;
  const double sign = walk(f, td, path, [&](cplx, cplx total, bool, std::size_t) { last = total; });
  if (end_sign) *end_sign = sign;
  return last;
}

// z with f(z) = target, seeded from sqrt(2 target) on the side sign (+1: Re > 0).
cplx invert_principal(cplx target, const TurningData& td, int sign) {
  cplx z = std::sqrt(2.0 * target);
  if (sign * std::real(z) < 0) z = -z;
  return newton_zeta(z, target, td, nullptr).z;
}

}  // namespace

cplx lemma31_residual(const UniformFrame& f, const TurningData& td) {
  const double x = f.x;
  // R(1): along the real axis to 1 - delta, then the inverse square root at
  // lambda = 1 in closed form, Q^{1/2} ~ C (1 - lambda)^{-1/2}.
  constexpr double delta = 1e-8;
  double sign = 1.0;
  cplx r1 = path_integral(f, td, {0.6, 0.9, 0.99}, &sign);
  r1 += sign * integrate_gk(
      [&](double t) {
        const double span = 0.01 - delta;
        const cplx l = 0.99 + span * (1.0 - (1.0 - t) * (1.0 - t));
        return sqrt_Q(l, f, td) * 2.0 * span * (1.0 - t);
      },
      0.0, 1.0);
  r1 += sign * 2.0 * delta * sqrt_Q(1.0 - delta, f, td);

  const double ymax = x * x;
  std::vector<cplx> pts;
  for (double y = 0.05;; y = std::min(1.5 * y, ymax)) {
    pts.push_back(cplx(0.5, -y));
    if (y >= ymax) break;
  }
  const cplx rl = path_integral(f, td, pts);
  const cplx rp = 2.0 * r1 - rl;
  const cplx z = invert_principal(rp, td, +1);
  const cplx lam = pts.back();
  const cplx lhs = 0.5 * I * x * z * z - 0.5 * I * x * td.alpha_sq * std::log(z);
  const cplx rhs = -x / 2.0 * lam + I * x / 4.0 + x / 4.0 + PI * f.ab - 0.25 * std::log(x) + 0.5 * std::log(f.b) -
                   I * f.s;
  return reduce_half_pi_i(lhs - rhs);
}

cplx lemma32_residual(const UniformFrame& f, const TurningData& td) {
  const double x = f.x;
  const double lam = 1.0 / x;
  const cplx r = path_integral(f, td, {0.45, 0.3, 0.1, lam});
  // -z solves the map with ln(zeta + w) moved by pi i from the principal sheet;
  // plain continuation along the real axis stays on the other one.
  const cplx z = -invert_principal(r, td, +1);
  const cplx lhs = 0.5 * I * x * z * z - 0.5 * I * x * td.alpha_sq * std::log(z);
  const cplx rhs = 0.5 * I * x * (-std::sqrt(lam)) + 0.25 * I * x - 0.25 * std::log(x) - PI * I / 4.0 +
                   0.5 * std::log(f.b) - I * f.s;
  return reduce_half_pi_i(lhs - rhs);
}

}  // namespace pv
