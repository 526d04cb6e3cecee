#include <cmath>
#include <cstdio>
#include <regex>

#include "pv/cli.hpp"

namespace pv {

using nlohmann::json;

void RunConfig::validate() const {
  params().validate();
  integrator().validate();
  window_from_fraction(x_max, fit_window_fraction);
  if (jobs < 1) throw Error(ErrorKind::invalid_argument, "RunConfig: jobs must be >= 1");
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig c;
  c.x0 = x0;
  c.x_max = x_max;
  c.rel_tol = rel_tol;
  c.abs_tol = abs_tol;
  c.series_order = series_order;
  return c;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::degenerate: return "degenerate";
    case Status::singular_abort: return "singular_abort";
    case Status::fit_failed: return "fit_failed";
    case Status::inadmissible: return "inadmissible";
  }
  return "?";
}

Status status_from_string(const std::string& s) {
  for (Status v : {Status::ok, Status::degenerate, Status::singular_abort, Status::fit_failed, Status::inadmissible})
    if (s == to_string(v)) return v;
  throw Error(ErrorKind::invalid_argument, "unknown status '" + s + "'");
}

namespace {

// Non-finite values go out as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? NAN : v.get<double>();
}

void put(json& j, const std::string& key, cplx z) {
  j[key + "_re"] = num(z.real());
  j[key + "_im"] = num(z.imag());
}

cplx get(const json& j, const std::string& key) { return {get_num(j, (key + "_re").c_str()), get_num(j, (key + "_im").c_str())}; }

}  // namespace

json to_json(const ReportRecord& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = r.command;
  j["theta"] = r.params.theta;
  put(j, "rho", r.params.rho);
  j["admissible"] = r.admissible;
  put(j, "a_pred", r.predicted.a);
  put(j, "b_pred", r.predicted.b);
  put(j, "c_pred", r.predicted.c);
  put(j, "kappa", r.predicted.kappa);
  j["invariant_residual"] = num(r.invariant_residual);
  if (r.command == "verify") {
    j["x0"] = r.run.x0;
    j["x_max"] = r.run.x_max;
    j["series_order"] = r.run.series_order;
    j["rel_tol"] = r.run.rel_tol;
    j["abs_tol"] = r.run.abs_tol;
    j["fit_window_fraction"] = r.run.fit_window_fraction;
    j["has_fit"] = r.has_fit;
    put(j, "a_fit", r.has_fit ? r.fit.a : cplx(NAN, NAN));
    put(j, "b_fit", r.has_fit ? r.fit.b : cplx(NAN, NAN));
    put(j, "ab_fit", r.has_fit ? r.fit.ab : cplx(NAN, NAN));
    j["rms_residual"] = num(r.has_fit ? r.fit.rms_residual : NAN);
    j["fit_degenerate"] = r.has_fit && r.fit.degenerate;
    j["err_a_rel"] = num(r.err_a_rel);
    j["err_b_rel"] = num(r.err_b_rel);
  }
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  return j;
}

ReportRecord report_from_json(const json& j) {
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw Error(ErrorKind::invalid_argument, "report: missing schema_version");
  if (j["schema_version"].get<int>() != kSchemaVersion)
    throw Error(ErrorKind::invalid_argument, "report: unsupported schema_version " + j["schema_version"].dump());
  ReportRecord r;
  try {
    r.command = j.at("command").get<std::string>();
    r.params = {j.at("theta").get<double>(), get(j, "rho")};
    r.admissible = j.at("admissible").get<bool>();
    r.predicted = {get(j, "a_pred"), get(j, "b_pred"), get(j, "c_pred"), get(j, "kappa")};
    r.invariant_residual = get_num(j, "invariant_residual");
    if (r.command == "verify") {
      r.run.theta = r.params.theta;
      r.run.rho = r.params.rho;
      r.run.x0 = j.at("x0").get<double>();
      r.run.x_max = j.at("x_max").get<double>();
      r.run.series_order = j.at("series_order").get<int>();
      r.run.rel_tol = j.at("rel_tol").get<double>();
      r.run.abs_tol = j.at("abs_tol").get<double>();
      r.run.fit_window_fraction = j.at("fit_window_fraction").get<double>();
      r.has_fit = j.at("has_fit").get<bool>();
      r.fit.a = get(j, "a_fit");
      r.fit.b = get(j, "b_fit");
      r.fit.ab = get(j, "ab_fit");
      r.fit.rms_residual = get_num(j, "rms_residual");
      r.fit.degenerate = j.at("fit_degenerate").get<bool>();
      r.err_a_rel = get_num(j, "err_a_rel");
      r.err_b_rel = get_num(j, "err_b_rel");
    }
    r.status = status_from_string(j.at("status").get<std::string>());
    r.message = j.at("message").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("report: ") + e.what());
  }
  return r;
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  static const std::string real = R"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
  static const std::regex pair(R"(\()" + real + "," + real + R"(\))");
  static const std::regex re_only("(" + real + ")");
  static const std::regex im_only("(" + real + R"(|[+-]?)i)");
  static const std::regex both("(" + real + ")(" + real + R"(|[+-])i)");
  const auto coef = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return std::stod(t);
  };
  std::smatch m;
  if (std::regex_match(s, m, pair)) {
    const auto comma = s.find(',');
    return {std::stod(s.substr(1, comma - 1)), std::stod(s.substr(comma + 1, s.size() - comma - 2))};
  }
  if (std::regex_match(s, m, re_only)) return {std::stod(m[1]), 0.0};
  if (std::regex_match(s, m, im_only)) return {0.0, coef(m[1])};
  if (std::regex_match(s, m, both)) {
    const std::string im = m[2];
    if (!im.empty() && im[0] != '+' && im[0] != '-')
      throw Error(ErrorKind::invalid_argument, "cannot parse complex number '" + text + "'");
    return {std::stod(m[1]), coef(im)};
  }
  throw Error(ErrorKind::invalid_argument, "cannot parse complex number '" + text + "'");
}

SweepConfig parse_sweep_config(const json& j) {
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion)
    throw Error(ErrorKind::invalid_argument, "sweep config: unsupported schema_version " + j["schema_version"].dump());
  SweepConfig c;
  try {
    c.thetas = j.at("thetas").get<std::vector<double>>();
    for (const auto& r : j.at("rhos")) {
      if (r.is_number()) c.rhos.emplace_back(r.get<double>(), 0.0);
      else if (r.is_string()) c.rhos.push_back(parse_complex(r.get<std::string>()));
      else c.rhos.emplace_back(r.value("re", 0.0), r.value("im", 0.0));
    }
    if (j.contains("run")) {
      const json& o = j["run"];
      for (auto it = o.begin(); it != o.end(); ++it) {
        const std::string& k = it.key();
        if (k == "x0") c.run.x0 = it->get<double>();
        else if (k == "x_max") c.run.x_max = it->get<double>();
        else if (k == "series_order") c.run.series_order = it->get<int>();
        else if (k == "rel_tol") c.run.rel_tol = it->get<double>();
        else if (k == "abs_tol") c.run.abs_tol = it->get<double>();
        else if (k == "fit_window_fraction") c.run.fit_window_fraction = it->get<double>();
        else if (k == "jobs") c.run.jobs = it->get<int>();
        else throw Error(ErrorKind::invalid_argument, "sweep config: unknown run key '" + k + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("sweep config: ") + e.what());
  }
  if (c.thetas.empty() || c.rhos.empty()) throw Error(ErrorKind::invalid_argument, "sweep config: empty grid");
  return c;
}

const char* const kSweepHeader =
    "theta,rho_re,rho_im,a_pred_re,a_pred_im,b_pred_re,b_pred_im,c_pred_re,c_pred_im,"
    "a_fit_re,a_fit_im,b_fit_re,b_fit_im,err_a_rel,err_b_rel,rms_residual,x_max,status";

std::string sweep_csv_row(const ReportRecord& r) {
  std::string row;
  char buf[40];
  const auto add = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    row += buf;
    row += ',';
  };
  const cplx a_fit = r.has_fit ? r.fit.a : cplx(NAN, NAN), b_fit = r.has_fit ? r.fit.b : cplx(NAN, NAN);
  for (double v : {r.params.theta, r.params.rho.real(), r.params.rho.imag(), r.predicted.a.real(),
                   r.predicted.a.imag(), r.predicted.b.real(), r.predicted.b.imag(), r.predicted.c.real(),
                   r.predicted.c.imag(), a_fit.real(), a_fit.imag(), b_fit.real(), b_fit.imag(), r.err_a_rel,
                   r.err_b_rel, r.has_fit ? r.fit.rms_residual : NAN, r.run.x_max})
    add(v);
  row += to_string(r.status);
  return row;
}

}  // namespace pv
