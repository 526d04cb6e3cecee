#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pv/cli.hpp"

using namespace pv;
using nlohmann::json;

namespace {

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "pvconn");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("parse_complex") {
  CHECK(parse_complex("1") == cplx(1, 0));
  CHECK(parse_complex("-0.5") == cplx(-0.5, 0));
  CHECK(parse_complex("2i") == cplx(0, 2));
  CHECK(parse_complex("i") == cplx(0, 1));
  CHECK(parse_complex("-i") == cplx(0, -1));
  CHECK(parse_complex("0.3-1.2i") == cplx(0.3, -1.2));
  CHECK(parse_complex("1e-3+2e-1i") == cplx(1e-3, 2e-1));
  CHECK(parse_complex("1 + i") == cplx(1, 1));
  CHECK(parse_complex("(0.3,-1.2)") == cplx(0.3, -1.2));
  CHECK_THROWS_AS(parse_complex("abc"), Error);
  CHECK_THROWS_AS(parse_complex("1.2.3i"), Error);
  CHECK_THROWS_AS(parse_complex(""), Error);
}

TEST_CASE("predict") {
  const auto r = cmd_predict({0.5, 0.0});
  CHECK(std::abs(r.predicted.a) <= 1e-15);
  CHECK(std::abs(r.predicted.b) <= 1e-15);
  CHECK(std::abs(r.predicted.c) <= 1e-15);
  CHECK(std::abs(r.predicted.kappa + 1.0) <= 1e-15);
  CHECK(std::abs(cmd_predict({0.25, 1.0}).predicted.c.real() + 0.17030) <= 5e-6);
  try {
    cmd_predict({0.5, cplx(0, 2)});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::inadmissible);
  }
  std::string out, err;
  CHECK(run({"predict", "--theta", "0.5", "--rho", "2i"}, &out, &err) == 2);
  CHECK(err.find("imaginary axis") != std::string::npos);
  CHECK(run({"predict", "--theta", "0.25", "--rho", "1"}, &out) == 0);
  const json j = json::parse(out);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["c_pred_re"].get<double>() == doctest::Approx(-0.17030).epsilon(1e-4));
  CHECK(j["invariant_residual"].get<double>() <= 1e-10);
}

TEST_CASE("report JSON round trip and schema check") {
  RunConfig c;
  c.theta = 0.25;
  c.rho = 1.0;
  const auto r = cmd_verify(c);
  const json j = to_json(r);
  const auto back = report_from_json(j);
  CHECK(back.status == r.status);
  CHECK(back.fit.a == r.fit.a);
  CHECK(back.err_b_rel == r.err_b_rel);
  CHECK(to_json(back) == j);
  json bad = j;
  bad["schema_version"] = 2;
  CHECK_THROWS_AS(report_from_json(bad), Error);
  bad.erase("schema_version");
  CHECK_THROWS_AS(report_from_json(bad), Error);
}

TEST_CASE("verify") {
  RunConfig c;
  const auto zero = cmd_verify(c);
  CHECK(zero.status == Status::ok);
  CHECK(zero.fit.a == 0.0);
  CHECK(zero.fit.b == 0.0);
  CHECK(zero.err_a_rel <= 1e-15);
  CHECK(zero.err_b_rel <= 1e-15);

  c.theta = 0.25;
  c.rho = 1.0;
  std::ostringstream traj;
  const auto r = cmd_verify(c, &traj);
  CHECK(r.status == Status::ok);
  CHECK(r.err_a_rel <= 0.05);
  CHECK(r.err_b_rel <= 0.05);
  std::istringstream in(traj.str());
  const auto t = read_trajectory_csv(in, c.params());
  CHECK(t.samples.back().x == 600.0);

  c.rho = cplx(0.0, 2.0);
  CHECK(cmd_verify(c).status == Status::inadmissible);
  c.x_max = 50;
  CHECK_THROWS_AS(cmd_verify(c), Error);

  std::string out;
  const std::string path = "test_cli_traj.csv";
  CHECK(run({"verify", "--theta", "0.4", "--rho", "0.5", "--x-max", "200", "--dump-trajectory", path}, &out) == 0);
  CHECK(json::parse(out)["status"] == "ok");
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "x,y_re,y_im,yp_re,yp_im,v_re,v_im");
  std::remove(path.c_str());
}

TEST_CASE("sweep") {
  const json cfg = json::parse(R"({"thetas": [0.25, 0.4], "rhos": [{"re": 0.5, "im": 0}, {"re": 1, "im": 0},
                                    {"re": 2, "im": 0}], "run": {"x_max": 150}})");
  const auto sc = parse_sweep_config(cfg);
  const std::string one = cmd_sweep(sc, 1);
  const std::string eight = cmd_sweep(sc, 8);
  CHECK(one == eight);
  CHECK(count_lines(one) == 7);
  CHECK(one.substr(0, one.find('\n')) ==
        "theta,rho_re,rho_im,a_pred_re,a_pred_im,b_pred_re,b_pred_im,c_pred_re,c_pred_im,"
        "a_fit_re,a_fit_im,b_fit_re,b_fit_im,err_a_rel,err_b_rel,rms_residual,x_max,status");
  CHECK(one.find(",ok\n") != std::string::npos);

  const json mixed = json::parse(R"({"thetas": [0.5], "rhos": [{"re": 0, "im": 2}, {"re": 0, "im": 0}, "0.5"],
                                     "run": {"x_max": 120}})");
  const std::string m = cmd_sweep(parse_sweep_config(mixed), 3);
  std::istringstream in(m);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> status;
  while (std::getline(in, line)) status.push_back(line.substr(line.rfind(',') + 1));
  REQUIRE(status.size() == 3);
  CHECK(status[0] == "inadmissible");
  CHECK(status[1] == "ok");
  CHECK(status[2] == "ok");

  CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"schema_version": 9, "thetas": [0.3], "rhos": [1]})")), Error);
  CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"thetas": [0.3], "rhos": [1], "run": {"bogus": 1}})")), Error);
  CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"thetas": [], "rhos": [1]})")), Error);
}

TEST_CASE("uniform-check") {
  const json j = cmd_uniform_check({0.25, 1.0}, {100, 400});
  CHECK(j["schema_version"] == kSchemaVersion);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][1]["spot_deviation"].get<double>() < j["rows"][0]["spot_deviation"].get<double>());
  CHECK(j["rows"][0].contains("nu_limit_re"));
  CHECK(j["ratios"]["alpha_sq_gap"].size() == 1);
  CHECK_THROWS_AS(cmd_uniform_check({0.5, cplx(0, 2)}, {100}), Error);
  CHECK(run({"uniform-check", "--theta", "0.25", "--rho", "1", "--x-list", "40"}) == 2);
}

TEST_CASE("exit codes") {
  CHECK(run({}) == 2);
  CHECK(run({"predict", "--theta", "0.3"}) == 2);
  CHECK(run({"predict", "--theta", "0.3", "--rho", "zz"}) == 2);
  CHECK(run({"verify", "--theta", "0.3", "--rho", "1", "--rel-tol", "1e-3"}) == 2);
  CHECK(run({"sweep", "/nonexistent/config.json"}) == 2);
  std::string out;
  CHECK(run({"selftest"}, &out) == 0);
  CHECK(count_lines(out) == 6);
}
