#pragma once

#include <cmath>
#include <complex>

namespace pv::detail {

// Complex arithmetic in binary128. Only the four field operations are needed.
struct QC {
  __float128 re = 0, im = 0;

  QC() = default;
  QC(__float128 r, __float128 i = 0) : re(r), im(i) {}
  QC(double r) : re(r), im(0) {}
  QC(int r) : re(r), im(0) {}
  QC(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }
  double mag() const { return std::hypot(static_cast<double>(re), static_cast<double>(im)); }

  friend QC operator+(QC a, QC b) { return {a.re + b.re, a.im + b.im}; }
  friend QC operator-(QC a, QC b) { return {a.re - b.re, a.im - b.im}; }
  friend QC operator-(QC a) { return {-a.re, -a.im}; }
  friend QC operator*(QC a, QC b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
  friend QC operator/(QC a, QC b) {
    const __float128 n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  QC& operator+=(QC b) { return *this = *this + b; }
  QC& operator-=(QC b) { return *this = *this - b; }
  QC& operator*=(QC b) { return *this = *this * b; }
};

inline double magnitude(std::complex<double> z) { return std::abs(z); }
inline double magnitude(QC z) { return z.mag(); }

}  // namespace pv::detail
