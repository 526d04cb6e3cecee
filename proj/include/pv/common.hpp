#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pv {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double PI = std::numbers::pi;

enum class ErrorKind {
  pole,
  non_convergence,
  sector_ambiguity,
  singular_state,
  step_underflow,
  degenerate,
  rank_deficient,
  invalid_argument,
  inadmissible,
  branch_ambiguity,
  matching_singularity,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// An integration that stopped early; last_x is the last accepted point.
class IntegrationAbort : public Error {
 public:
  IntegrationAbort(ErrorKind kind, const std::string& what, double last_x)
      : Error(kind, what), last_x_(last_x) {}
  double last_x() const { return last_x_; }

 private:
  double last_x_;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace pv
