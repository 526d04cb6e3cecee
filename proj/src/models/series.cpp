#include <cmath>
#include <string>
#include <vector>

#include "pv/detail/quad.hpp"
#include "pv/models.hpp"

namespace pv {

namespace {

using detail::QC;

// Truncated power-series arithmetic on coefficient vectors of equal length.
std::vector<QC> mul(const std::vector<QC>& a, const std::vector<QC>& b) {
  const std::size_t n = a.size();
  std::vector<QC> r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<QC> deriv(const std::vector<QC>& a) {
  std::vector<QC> r(a.size());
  for (std::size_t k = 1; k < a.size(); ++k) r[k - 1] = a[k] * QC(static_cast<int>(k));
  return r;
}

std::vector<QC> shift(const std::vector<QC>& a) {  // multiply by x
  std::vector<QC> r(a.size());
  for (std::size_t k = 1; k < a.size(); ++k) r[k] = a[k - 1];
  return r;
}

// Coefficients of
//   P = 2x y(y-1) y'' + 2 y(y-1) y' - x(3y-1) y'^2 - 2(1-2 theta) y^2 (y-1) + x y^2 (y+1),
// the PV equation multiplied through by 2x y (y-1), truncated to c.size() terms.
std::vector<QC> polynomial_form(const std::vector<QC>& c, double theta) {
  const std::size_t n = c.size();
  std::vector<QC> one(n), ym1 = c, yp1 = c, three_ym1(n);
  one[0] = QC(1);
  ym1[0] -= QC(1);
  yp1[0] += QC(1);
  for (std::size_t k = 0; k < n; ++k) three_ym1[k] = c[k] * QC(3);
  three_ym1[0] -= QC(1);
  const auto d1 = deriv(c);
  const auto d2 = deriv(d1);
  const auto yy1 = mul(c, ym1);
  const auto y2 = mul(c, c);
  std::vector<QC> p(n);
  const auto t1 = shift(mul(yy1, d2));
  const auto t2 = mul(yy1, d1);
  const auto t3 = shift(mul(three_ym1, mul(d1, d1)));
  const auto t4 = mul(y2, ym1);
  const auto t5 = shift(mul(y2, yp1));
  const QC g(1.0 - 2.0 * theta);
  for (std::size_t k = 0; k < n; ++k)
    p[k] = QC(2) * t1[k] + QC(2) * t2[k] - t3[k] - QC(2) * g * t4[k] + t5[k];
  return p;
}

QC kappa_q(const Params& p) {
  const QC ir = QC(cplx(0.0, 1.0) * p.rho);
  const QC th(p.theta);
  const QC den = ir - th;
  if (den.re == 0 && den.im == 0) throw Error(ErrorKind::pole, "origin_series: kappa has a pole at rho = -i theta");
  return (ir + th) / den;
}

std::vector<QC> series_q(const Params& p, int order) {
  p.validate();
  if (order < kMinSeriesOrder || order > kMaxSeriesOrder)
    throw Error(ErrorKind::invalid_argument, "origin_series: order must lie in [2, 12]");
  std::vector<QC> c(static_cast<std::size_t>(order) + 1);
  c[0] = kappa_q(p);
  const QC lin0 = QC(2) * c[0] * (c[0] - QC(1));
  if (lin0.mag() < 1e-300)
    throw Error(ErrorKind::degenerate, "origin_series: kappa in {0, 1} makes the order-matching system singular");
  // The x^k coefficient of P is linear in y_{k+1} with slope 2 y0 (y0-1) (k+1)^2;
  // evaluating it with y_{k+1} = 0 gives the remainder to cancel.
  for (int k = 0; k < order; ++k) {
    std::vector<QC> trial(c.begin(), c.begin() + k + 2);
    trial[k + 1] = QC(0);
    const QC r = polynomial_form(trial, p.theta)[k];
    const QC lin = lin0 * QC((k + 1) * (k + 1));
    c[k + 1] = -r / lin;
  }
  return c;
}

}  // namespace

SeriesExpansion origin_series(const Params& p, int order) {
  const auto q = series_q(p, order);
  SeriesExpansion s;
  s.order = order;
  s.coeffs.reserve(q.size());
  for (const auto& v : q) s.coeffs.push_back(v.to_cplx());
  return s;
}

cplx SeriesExpansion::value(double x) const {
  cplx r = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * (x - x0) + *it;
  return r;
}

cplx SeriesExpansion::derivative(double x) const {
  cplx r = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) r = r * (x - x0) + static_cast<double>(k) * coeffs[k];
  return r;
}

cplx series_residual(const Params& p, int order, double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::invalid_argument, "series_residual: x must be positive");
  const auto c = series_q(p, order);
  const QC xq(x);
  QC y, yp, ypp;
  for (std::size_t k = c.size(); k-- > 0;) {
    y = y * xq + c[k];
    if (k >= 1) yp = yp * xq + c[k] * QC(static_cast<int>(k));
    if (k >= 2) ypp = ypp * xq + c[k] * QC(static_cast<int>(k * (k - 1)));
  }
  const QC one(1), two(2);
  const QC ym1 = y - one;
  const QC rhs = (one / (two * y) + one / ym1) * yp * yp - yp / xq + QC(1.0 - 2.0 * p.theta) * y / xq -
                 y * (y + one) / (two * ym1);
  return (xq * (ypp - rhs)).to_cplx();
}

}  // namespace pv
