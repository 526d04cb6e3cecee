#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pv/cli.hpp"
#include "pv/uniform.hpp"

namespace pv {

using nlohmann::json;

namespace {

const char* kAdmissibleText =
    "rho must not lie on the imaginary axis with |Im rho| >= |theta| (and rho != +-i theta)";

// Predicted amplitudes under the fit's noise floor count as zero; the error is then absolute.
double rel_err(cplx got, cplx want) {
  const double d = std::abs(got - want);
  return std::abs(want) >= kAmplitudeFloor ? d / std::abs(want) : d;
}

void fill_prediction(ReportRecord& r) {
  r.admissible = admissible(r.params);
  if (!r.admissible) {
    r.predicted = {cplx(NAN, NAN), cplx(NAN, NAN), cplx(NAN, NAN), cplx(NAN, NAN)};
    r.invariant_residual = NAN;
    r.err_a_rel = r.err_b_rel = NAN;
    r.status = Status::inadmissible;
    r.message = kAdmissibleText;
    return;
  }
  r.predicted = predict(r.params);
  const auto sm = invariants_small_x(r.params);
  const auto lg = invariants_large_x(r.predicted.a, r.predicted.b, r.params.theta);
  r.invariant_residual = std::max(std::abs(sm.I0 - lg.I0), std::abs(sm.I1 - lg.I1));
}

}  // namespace

ReportRecord cmd_predict(const Params& p) {
  p.validate();
  ReportRecord r;
  r.command = "predict";
  r.params = p;
  r.run.theta = p.theta;
  r.run.rho = p.rho;
  fill_prediction(r);
  if (!r.admissible) throw Error(ErrorKind::inadmissible, std::string("predict: ") + kAdmissibleText);
  return r;
}

ReportRecord cmd_verify(const RunConfig& cfg, std::ostream* trajectory) {
  cfg.validate();
  ReportRecord r;
  r.command = "verify";
  r.params = cfg.params();
  r.run = cfg;
  r.err_a_rel = r.err_b_rel = NAN;
  fill_prediction(r);
  if (!r.admissible) return r;

  Trajectory traj;
  try {
    traj = integrate(r.params, cfg.integrator());
  } catch (const IntegrationAbort& e) {
    r.status = Status::singular_abort;
    r.message = std::string(e.what()) + " (last x = " + std::to_string(e.last_x()) + ")";
    return r;
  } catch (const Error& e) {
    r.status = Status::singular_abort;
    r.message = e.what();
    return r;
  }
  if (trajectory) write_trajectory_csv(*trajectory, traj);

  const FitWindow w = window_from_fraction(cfg.x_max, cfg.fit_window_fraction);
  try {
    cplx ab0 = 0.0;
    try {
      ab0 = estimate_ab_phase(traj, w);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate) throw;
    }
    r.fit = fit_ab(traj, w, ab0);
    r.has_fit = true;
  } catch (const Error& e) {
    r.status = Status::fit_failed;
    r.message = e.what();
    return r;
  }
  r.err_a_rel = rel_err(r.fit.a, r.predicted.a);
  r.err_b_rel = rel_err(r.fit.b, r.predicted.b);
  // A vanishing oscillation is only a success when the prediction vanishes too.
  if (r.fit.degenerate &&
      (std::abs(r.predicted.a) >= kAmplitudeFloor || std::abs(r.predicted.b) >= kAmplitudeFloor)) {
    r.status = Status::degenerate;
    r.message = "oscillation below the noise floor but the predicted amplitudes are nonzero";
  }
  return r;
}

std::string cmd_sweep(const SweepConfig& cfg, int jobs) {
  if (jobs < 1) throw Error(ErrorKind::invalid_argument, "sweep: jobs must be >= 1");
  std::vector<RunConfig> cases;
  for (double th : cfg.thetas)
    for (cplx rho : cfg.rhos) {
      RunConfig c = cfg.run;
      c.theta = th;
      c.rho = rho;
      cases.push_back(c);
    }
  std::vector<std::string> rows(cases.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      ReportRecord r;
      try {
        r = cmd_verify(cases[i]);
      } catch (const Error& e) {
        r.params = cases[i].params();
        r.run = cases[i];
        fill_prediction(r);
        r.err_a_rel = r.err_b_rel = NAN;
        if (r.status != Status::inadmissible) r.status = Status::fit_failed;
        r.message = e.what();
      }
      rows[i] = sweep_csv_row(r);
    }
  };
  const int n = std::min<int>(jobs, static_cast<int>(cases.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& row : rows) out += row + "\n";
  return out;
}

json cmd_uniform_check(const Params& p, const std::vector<double>& xs) {
  p.validate();
  if (!admissible(p)) throw Error(ErrorKind::inadmissible, std::string("uniform-check: ") + kAdmissibleText);
  if (xs.empty()) throw Error(ErrorKind::invalid_argument, "uniform-check: empty x list");
  const cplx a = a_of_rho(p), b = b_of_rho(p);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "uniform-check";
  j["theta"] = p.theta;
  j["rho_re"] = p.rho.real();
  j["rho_im"] = p.rho.imag();
  j["ab_re"] = (a * b).real();
  j["ab_im"] = (a * b).imag();
  json rows = json::array();
  for (double x : xs) {
    const auto f = UniformFrame::make(x, a, b, p.theta);
    const auto td = turning_points(f);
    const cplx target = (4.0 * f.ab + I) / x;
    const cplx nu_lim = 2.0 * I * f.ab - 1.0;
    json row;
    row["x"] = x;
    row["lambda1_re"] = td.lambda1.real();
    row["lambda1_im"] = td.lambda1.imag();
    row["lambda2_re"] = td.lambda2.real();
    row["lambda2_im"] = td.lambda2.imag();
    row["alpha_sq_re"] = td.alpha_sq.real();
    row["alpha_sq_im"] = td.alpha_sq.imag();
    row["alpha_sq_target_re"] = target.real();
    row["alpha_sq_target_im"] = target.imag();
    row["alpha_sq_gap"] = std::abs(td.alpha_sq - target) / std::abs(target);
    row["nu_re"] = td.nu.real();
    row["nu_im"] = td.nu.imag();
    row["nu_limit_re"] = nu_lim.real();
    row["nu_limit_im"] = nu_lim.imag();
    row["nu_gap"] = std::abs(td.nu - nu_lim);
    row["lemma31_residual"] = std::abs(lemma31_residual(f, td));
    row["lemma32_residual"] = std::abs(lemma32_residual(f, td));
    row["spot_deviation"] = theorem21_spotcheck(f, td, default_spot_segment()).max_deviation;
    rows.push_back(row);
  }
  j["rows"] = rows;
  json ratios;
  for (const char* key : {"alpha_sq_gap", "spot_deviation", "lemma31_residual", "lemma32_residual"}) {
    json rs = json::array();
    for (std::size_t i = 1; i < rows.size(); ++i) rs.push_back(rows[i][key].get<double>() / rows[i - 1][key].get<double>());
    ratios[key] = rs;
  }
  j["ratios"] = ratios;
  return j;
}

namespace {

int exit_code_for(const Error& e) {
  return (e.kind() == ErrorKind::invalid_argument || e.kind() == ErrorKind::inadmissible) ? 2 : 1;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::invalid_argument, "cannot open '" + path + "' for writing");
  f << text;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Painleve V connection formulae: prediction and numerical verification", "pvconn"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string rho_text = "0";
  std::string out_path, traj_path, sweep_path, xs_text = "100,400,1600";

  const auto add_params = [&](CLI::App* s) {
    s->add_option("--theta", cfg.theta, "Theta")->required();
    s->add_option("--rho", rho_text, "rho, e.g. 1, 2i, 0.3-0.5i")->required();
  };
  const auto add_run = [&](CLI::App* s) {
    s->add_option("--x0", cfg.x0, "series start point");
    s->add_option("--x-max", cfg.x_max, "end of integration");
    s->add_option("--series-order", cfg.series_order, "order of the origin series");
    s->add_option("--rel-tol", cfg.rel_tol, "integrator relative tolerance");
    s->add_option("--abs-tol", cfg.abs_tol, "integrator absolute tolerance");
    s->add_option("--fit-window-fraction", cfg.fit_window_fraction, "fit window is [f x_max, x_max]");
  };

  auto* predict_cmd = app.add_subcommand("predict", "closed-form a, b, c and kappa");
  add_params(predict_cmd);
  predict_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* verify_cmd = app.add_subcommand("verify", "integrate, fit and compare with the prediction");
  add_params(verify_cmd);
  add_run(verify_cmd);
  verify_cmd->add_option("--out", out_path, "write JSON here instead of stdout");
  verify_cmd->add_option("--dump-trajectory", traj_path, "write the trajectory CSV here");

  auto* sweep_cmd = app.add_subcommand("sweep", "verify over a grid given by a JSON config; CSV out");
  sweep_cmd->add_option("config", sweep_path, "sweep config JSON")->required();
  sweep_cmd->add_option("--jobs", cfg.jobs, "worker threads");
  sweep_cmd->add_option("--out", out_path, "write CSV here instead of stdout");

  auto* uniform_cmd = app.add_subcommand("uniform-check", "uniform asymptotics diagnostics at the predicted a, b");
  add_params(uniform_cmd);
  uniform_cmd->add_option("--x-list", xs_text, "comma-separated x values (each >= 50)");
  uniform_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* self_cmd = app.add_subcommand("selftest", "identity suites and the exact-solution fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*self_cmd) {
      bool all = true;
      for (const auto& s : cmd_selftest()) {
        out << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.checks << " checks)";
        if (!s.passed) out << ": " << s.first_failure;
        out << "\n";
        if (!s.passed && all) {
          err << "first failure: " << s.name << ": " << s.first_failure << "\n";
          all = false;
        }
      }
      return all ? 0 : 1;
    }
    if (*sweep_cmd) {
      std::ifstream f(sweep_path);
      if (!f) throw Error(ErrorKind::invalid_argument, "cannot read '" + sweep_path + "'");
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_argument, std::string("sweep config: ") + e.what());
      }
      const SweepConfig sc = parse_sweep_config(j);
      emit(cmd_sweep(sc, cfg.jobs), out_path, out);
      return 0;
    }

    cfg.rho = parse_complex(rho_text);
    if (*predict_cmd) {
      emit(to_json(cmd_predict(cfg.params())).dump(2) + "\n", out_path, out);
      return 0;
    }
    if (*verify_cmd) {
      cfg.validate();
      std::ofstream traj;
      if (!traj_path.empty()) {
        traj.open(traj_path, std::ios::binary);
        if (!traj) throw Error(ErrorKind::invalid_argument, "cannot open '" + traj_path + "' for writing");
      }
      const ReportRecord r = cmd_verify(cfg, traj_path.empty() ? nullptr : &traj);
      emit(to_json(r).dump(2) + "\n", out_path, out);
      if (r.status == Status::inadmissible) {
        err << "error: " << r.message << "\n";
        return 2;
      }
      return (r.status == Status::ok || r.status == Status::degenerate) ? 0 : 1;
    }
    if (*uniform_cmd) {
      std::vector<double> xs;
      std::stringstream ss(xs_text);
      for (std::string item; std::getline(ss, item, ',');) {
        try {
          xs.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw Error(ErrorKind::invalid_argument, "bad --x-list entry '" + item + "'");
        }
      }
      emit(cmd_uniform_check(cfg.params(), xs).dump(2) + "\n", out_path, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace pv
