#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "pv/extract.hpp"

namespace pv {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  double theta = 0.5;
  cplx rho = 0.0;
  double x0 = 1e-3;
  double x_max = 600.0;
  int series_order = 8;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double fit_window_fraction = 0.5;
  int jobs = 1;

  // Throws invalid_argument; mirrors IntegratorConfig and FitWindow.
  void validate() const;
  IntegratorConfig integrator() const;
  Params params() const { return {theta, rho}; }
};

enum class Status { ok, degenerate, singular_abort, fit_failed, inadmissible };

const char* to_string(Status s);
Status status_from_string(const std::string& s);

struct ReportRecord {
  std::string command;
  Params params;
  RunConfig run;
  bool admissible = false;
  ConnectionPrediction predicted{};
  // Largest component of |invariants_small_x - invariants_large_x(a, b)|.
  double invariant_residual = 0.0;
  bool has_fit = false;
  AsymptoticFit fit;
  double err_a_rel = 0.0;
  double err_b_rel = 0.0;
  Status status = Status::ok;
  std::string message;
};

nlohmann::json to_json(const ReportRecord& r);
// Throws invalid_argument on a missing or unknown schema_version.
ReportRecord report_from_json(const nlohmann::json& j);

// "1.5", "2i", "-i", "0.3-1.2i", "(0.3,-1.2)".
cplx parse_complex(const std::string& s);

// Throws inadmissible (with the constraint in the message) outside the admissible set.
ReportRecord cmd_predict(const Params& p);

// Integration and fit failures go into status; trajectory, if given, receives the CSV.
ReportRecord cmd_verify(const RunConfig& cfg, std::ostream* trajectory = nullptr);

struct SweepConfig {
  std::vector<double> thetas;
  std::vector<cplx> rhos;
  RunConfig run;
};

// {"thetas": [...], "rhos": [{"re": .., "im": ..}], "run": {...}}; an optional
// schema_version must equal kSchemaVersion.
SweepConfig parse_sweep_config(const nlohmann::json& j);

extern const char* const kSweepHeader;

// One row per (theta, rho), theta-major. Rows do not depend on jobs.
std::string cmd_sweep(const SweepConfig& cfg, int jobs);
std::string sweep_csv_row(const ReportRecord& r);

nlohmann::json cmd_uniform_check(const Params& p, const std::vector<double>& xs);

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::string first_failure;
  int checks = 0;
};

SuiteResult selfcheck_gamma_product();    // 50 real c in [-1, 1], 1e-12
SuiteResult selfcheck_bessel_half();      // half-integer closed form, 1e-12
SuiteResult selfcheck_pcd_recurrence();   // three-term recurrence at 100 random points, 1e-10
SuiteResult selfcheck_exact_fixture();    // theta = 1/2, rho = 0
SuiteResult selfcheck_ab_equals_c(int n, unsigned long seed);
SuiteResult selfcheck_invariants(int n, unsigned long seed);

// Draws theta in (0.05, 0.95) and |rho| <= 3, a third of them on the admissible
// part of the imaginary axis.
Params random_admissible(std::mt19937_64& rng);

std::vector<SuiteResult> cmd_selftest();

// Entry point of the pvconn tool; returns the exit code (0 ok, 1 failure, 2 bad input).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pv
