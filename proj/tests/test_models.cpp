#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pv/models.hpp"

using namespace pv;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Coefficients y_0..y_5 from an exact symbolic solve (sympy, rational arithmetic).
struct SeriesRef {
  double theta;
  double rho;
  cplx c[6];
};
const SeriesRef kSeriesRef[] = {
    {0.25, 1.0,
     {{0.8823529411764706, -0.47058823529411764},
      {0.4411764705882353, -0.23529411764705882},
      {-0.0661764705882353, -0.3897058823529412},
      {-0.07904411764705882, -0.17034313725490197},
      {-0.0861672794117647, -0.006615732230392157},
      {-0.037109375, 0.015641276041666666}}},
    {0.4, 2.0,
     {{0.9230769230769231, -0.38461538461538464},
      {0.18461538461538463, -0.07692307692307693},
      {-0.2123076923076923, -0.5615384615384615},
      {-0.049846153846153846, -0.10923076923076923},
      {-0.1686153846153846, 0.06592307692307692},
      {-0.03543926153846154, 0.019099692307692307}}},
    {0.5, 0.5, {{0, -1}, {0, 0}, {-0.125, 0}, {0, 0}, {0.001953125, 0.0078125}, {0, 0}}},
};

}  // namespace

TEST_CASE("pv_rhs direct values") {
  CHECK(std::abs(pv_rhs(1.0, {-1.0, 0.0}, 0.3) - (-0.4)) < 1e-15);
  CHECK(std::abs(pv_rhs(2.0, {2.0, 0.0}, 0.25) - (-2.5)) < 1e-15);
  for (double x : {1e-3, 0.5, 7.0, 600.0}) CHECK(std::abs(pv_rhs(x, {-1.0, 0.0}, 0.5)) == 0.0);
}

TEST_CASE("pv_rhs guards") {
  CHECK_THROWS_AS(pv_rhs(1.0, {1e-13, 0.0}, 0.3), Error);
  CHECK_THROWS_AS(pv_rhs(1.0, {1.0 + 1e-11, 0.0}, 0.3), Error);
  CHECK_THROWS_AS(pv_rhs(1.0, {2e8, 0.0}, 0.3), Error);
  CHECK_THROWS_AS(pv_rhs(0.0, {2.0, 0.0}, 0.3), Error);
  try {
    pv_rhs(1.0, {0.0, 0.0}, 0.3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_state);
  }
}

TEST_CASE("piii_rhs direct values") {
  CHECK(std::abs(piii_rhs(3.0, 1.0, 0.0, 0.2)) == 0.0);
  CHECK(std::abs(piii_rhs(0.7, -1.0, 0.0, 0.9)) == 0.0);
  CHECK(std::abs(piii_rhs(1.0, 2.0, 1.0, 0.0) - 10.0) < 1e-14);
  CHECK_THROWS_AS(piii_rhs(1.0, 0.0, 1.0, 0.0), Error);
}

TEST_CASE("pv_from_piii and round trips") {
  auto p = pv_from_piii(3.0, 1.0);
  CHECK(std::abs(p.y - 0.25) < 1e-16);
  CHECK(p.x == 4.0);
  CHECK(std::abs(pv_from_piii(1.0, 2.0).y) == 0.0);
  CHECK_THROWS_AS(pv_from_piii(-1.0, 1.0), Error);

  const cplx ws[] = {{3.0, 0.0}, {0.4, 1.3}, {-2.0, 0.5}};
  for (cplx w : ws) {
    const auto yx = pv_from_piii(w, 0.3);
    const auto a = piii_from_pv(yx.y, yx.x, SqrtBranch::principal);
    const auto b = piii_from_pv(yx.y, yx.x, SqrtBranch::negated);
    CHECK(std::abs(a.t - 0.3) < 1e-16);
    // Negating sqrt(y) maps w to 1/w.
    const bool hit = close(a.w, w, 1e-12) || close(b.w, w, 1e-12);
    CHECK(hit);
    CHECK(close(a.w * b.w, 1.0, 1e-12));
  }
  CHECK_THROWS_AS(piii_from_pv(1.0, 1.0), Error);
}

TEST_CASE("sine-Gordon and harmonic forms") {
  CHECK(sine_gordon_rhs(1.0, 0.0, 0.0) == 0.0);
  CHECK(std::abs(sine_gordon_rhs(2.0, PI / 4, 0.0) - 2.0) < 1e-15);
  CHECK(harmonic_form_rhs(1.0, 0.0, 0.0) == 0.0);
  CHECK(std::abs(harmonic_form_rhs(1.3, PI, 0.0)) < 1e-14);
  CHECK_THROWS_AS(sine_gordon_rhs(0.0, 0.1, 0.1), Error);

  // Classical RK4 along each real equation; the substituted w must satisfy PIII.
  auto run = [](auto rhs, double theta, auto make_w) {
    double t = 0.5, u = 0.3, up = -0.2;
    const double h = 1e-3;
    double worst = 0.0;
    for (int i = 0; i < 3000; ++i) {
      auto f = [&](double tt, double a, double b) { return rhs(tt, a, b); };
      const double k1u = up, k1p = f(t, u, up);
      const double k2u = up + h / 2 * k1p, k2p = f(t + h / 2, u + h / 2 * k1u, up + h / 2 * k1p);
      const double k3u = up + h / 2 * k2p, k3p = f(t + h / 2, u + h / 2 * k2u, up + h / 2 * k2p);
      const double k4u = up + h * k3p, k4p = f(t + h, u + h * k3u, up + h * k3p);
      u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
      up += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
      t += h;
      if (i % 100 == 0) {
        const double upp = rhs(t, u, up);
        cplx w, wp, wpp;
        make_w(u, up, upp, w, wp, wpp);
        worst = std::max(worst, std::abs(wpp - piii_rhs(t, w, wp, theta)) / std::max(1.0, std::abs(wpp)));
      }
    }
    return worst;
  };
  const double sg = run(sine_gordon_rhs, 0.5, [](double u, double up, double upp, cplx& w, cplx& wp, cplx& wpp) {
    w = std::exp(I * u);
    wp = I * up * w;
    wpp = (I * upp - up * up) * w;
  });
  CHECK(sg <= 1e-10);
  const double hf = run(harmonic_form_rhs, 0.0, [](double u, double up, double upp, cplx& w, cplx& wp, cplx& wpp) {
    w = -std::exp(I * u);
    wp = I * up * w;
    wpp = (I * upp - up * up) * w;
  });
  CHECK(hf <= 1e-10);
}

TEST_CASE("v_from_y") {
  CHECK(std::abs(v_from_y(4.0, {-1.0, 0.0}, 0.5) - (-0.75)) < 1e-16);
  CHECK_THROWS_AS(v_from_y(1.0, {1.0, 0.0}, 0.5), Error);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double x = 0.1 + std::abs(u(rng)) * 10.0, th = u(rng);
    const State s{{u(rng), u(rng)}, {u(rng), u(rng)}};
    if (std::abs(s.y - 1.0) < 0.1) continue;
    const cplx v = v_from_y(x, s, th);
    const cplx lhs = x * s.yp;
    const cplx rhs = x * s.y - 2.0 * v * (s.y - 1.0) * (s.y - 1.0) + 2.0 * th * (s.y - 1.0);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(x * s.y)));
  }
}

TEST_CASE("origin_series leading coefficients") {
  auto s = origin_series({0.5, 0.0}, 8);
  CHECK(s.order == 8);
  REQUIRE(s.coeffs.size() == 9);
  CHECK(std::abs(s.coeffs[0] + 1.0) == 0.0);
  for (std::size_t k = 1; k < s.coeffs.size(); ++k) CHECK(std::abs(s.coeffs[k]) == 0.0);

  s = origin_series({0.5, 1.0}, 4);
  CHECK(std::abs(s.coeffs[0] - cplx(0.6, -0.8)) < 1e-15);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95), r(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Params p{u(rng), {r(rng), r(rng) * 0.2}};
    const auto e = origin_series(p, 6);
    CHECK(close(e.coeffs[1], e.coeffs[0] * (1.0 - 2.0 * p.theta), 1e-14));
  }
}

TEST_CASE("origin_series against symbolic coefficients") {
  for (const auto& ref : kSeriesRef) {
    const auto s = origin_series({ref.theta, ref.rho}, 5);
    for (int k = 0; k <= 5; ++k) {
      INFO("theta=" << ref.theta << " rho=" << ref.rho << " k=" << k);
      CHECK(std::abs(s.coeffs[k] - ref.c[k]) <= 1e-14);
    }
  }
}

TEST_CASE("origin_series errors") {
  CHECK_THROWS_AS(origin_series({0.25, 1.0}, 1), Error);
  CHECK_THROWS_AS(origin_series({0.25, 1.0}, 13), Error);
  CHECK_THROWS_AS(origin_series({1.0, 1.0}, 4), Error);
  try {
    origin_series({0.25, cplx(0.0, 0.25)}, 4);  // kappa = 0
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
  try {
    origin_series({0.25, cplx(0.0, -0.25)}, 4);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole);
  }
}

TEST_CASE("series residual order") {
  const Params ps[] = {{0.25, 1.0}, {0.4, 2.0}, {0.7, {0.5, 0.3}}, {0.15, -1.5}, {0.6, {0.0, 0.3}}};
  for (const auto& p : ps) {
    // Above order 8 the residual at 1e-3 approaches binary128 rounding.
    for (int n = kMinSeriesOrder; n <= 8; ++n) {
      const double r1 = std::abs(series_residual(p, n, 1e-3));
      const double r2 = std::abs(series_residual(p, n, 1e-2));
      const double slope = std::log10(r2 / r1);
      INFO("theta=" << p.theta << " order=" << n << " slope=" << slope);
      CHECK(std::abs(slope - n) <= 0.2);
    }
  }
  // Exact solution: the residual vanishes identically.
  CHECK(std::abs(series_residual({0.5, 0.0}, 8, 1e-2)) == 0.0);
}

TEST_CASE("series value and derivative") {
  const auto s = origin_series({0.25, 1.0}, 8);
  const double x = 1e-2, h = 1e-5;
  const cplx fd = (s.value(x + h) - s.value(x - h)) / (2 * h);
  CHECK(std::abs(fd - s.derivative(x)) < 1e-9);
  CHECK(close(s.state(0.0).y, s.coeffs[0], 0.0));
}

TEST_CASE("trajectory CSV round trip") {
  Trajectory t{{0.25, 1.0}, {{1.0, {0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}}, {2.5, {-1.0 / 3, 1e-20}, {7, 8}, {9, 10}}}};
  std::stringstream ss;
  write_trajectory_csv(ss, t);
  const std::string text = ss.str();
  CHECK(text.rfind("x,y_re,y_im,yp_re,yp_im,v_re,v_im\n", 0) == 0);
  const auto back = read_trajectory_csv(ss, t.params);
  REQUIRE(back.samples.size() == 2);
  CHECK(back.samples[1].y == t.samples[1].y);
  CHECK(back.samples[0].v == t.samples[0].v);
  std::stringstream bad("x,y\n1,2\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad, t.params), Error);
}
