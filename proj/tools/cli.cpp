#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "corput/decay_fitter.hpp"
#include "corput/error.hpp"
#include "corput/hypothesis_checker.hpp"
#include "corput/osc_integrator.hpp"
#include "corput/quadrature.hpp"
#include "corput/report_json.hpp"
#include "corput/sublevel.hpp"

namespace corput::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config_path;
  std::string out_dir;
  bool json = false;
};

// %.17g keeps every run diffable at full precision
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentConfig resolve(const Globals& g) {
  ExperimentConfig c = g.config_path.empty() ? ExperimentConfig{} : load_config(g.config_path);
  if (!g.out_dir.empty()) c.out_dir = g.out_dir;
  return c;
}

ProblemInstance make_instance(const ExperimentConfig& c) {
  try {
    return catalog(c.instance, c.params);
  } catch (const Error& e) {
    throw ConfigError(std::string("[instance] ") + e.what());
  }
}

IntegrationOptions integration_options(const ExperimentConfig& c) {
  IntegrationOptions o;
  o.tol = c.quadrature_tol;
  o.max_panels = c.max_panels;
  o.sphere_resolution = c.sphere_resolution;
  return o;
}

CheckOptions check_options(const ExperimentConfig& c) {
  CheckOptions o;
  o.f1_tol = c.f1_tol;
  o.c_min = c.c_min;
  o.derivatives.tolerance = c.fd_tol;
  o.grid.sphere_resolution = c.sphere_resolution;
  return o;
}

class OutputDir {
 public:
  explicit OutputDir(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_ + ": " + ec.message());
    // fail before any long computation if nothing can be written
    const fs::path probe = fs::path(dir_) / ".corput-write-probe";
    {
      std::ofstream f(probe);
      if (!f) throw IoError("output directory " + dir_ + " is not writable");
    }
    fs::remove(probe, ec);
  }

  bool enabled() const { return !dir_.empty(); }

  void write(const std::string& name, const std::string& content) const {
    const fs::path path = fs::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw IoError("cannot write " + path.string());
  }

 private:
  std::string dir_;
};

Json envelope(const std::string& command, const ExperimentConfig& c) {
  Json j;
  j["command"] = command;
  j["config"] = c.to_json();
  return j;
}

// JSON goes to stdout with --json, the human summary otherwise; the out dir
// always gets the JSON report when requested.
void emit(const Globals& g, const ExperimentConfig& c, const OutputDir& dir, const std::string& command,
          const Json& report, const std::string& summary, std::ostream& out) {
  if (g.json)
    out << report.dump(2) << "\n";
  else
    out << summary;
  if (dir.enabled() && c.wants("json")) dir.write(command + ".json", report.dump(2) + "\n");
}

std::string verdict_word(bool ok) { return ok ? "pass" : "FAIL"; }

// ---------------------------------------------------------------------------

int cmd_catalog(const Globals& g, std::ostream& out) {
  if (g.json) {
    Json list = Json::array();
    for (const auto& e : catalog_entries()) {
      Json params = Json::array();
      for (const auto& p : e.params)
        params.push_back({{"name", p.name}, {"default", p.default_value}, {"description", p.description}});
      list.push_back({{"name", e.name}, {"description", e.description}, {"params", params}});
    }
    out << list.dump(2) << "\n";
    return kOk;
  }
  for (const auto& e : catalog_entries()) {
    out << e.name << "\n    " << e.description << "\n";
    for (const auto& p : e.params)
      out << "      " << p.name << " = " << p.default_value << "    " << p.description << "\n";
  }
  return kOk;
}

std::string analyze_summary(const ConditionReport& r) {
  std::ostringstream s;
  s << "instance " << r.instance << "\n";
  for (const auto& e : r.conditions) {
    s << "  " << e.name << "  " << verdict_word(e.passed);
    if (e.constant) s << "  constant=" << num(*e.constant);
    s << "\n";
  }
  for (const auto& c : r.certificates)
    s << "  " << c.name << "  " << to_string(c.status) << "  best_constant=" << num(c.best_constant) << "\n";
  if (r.sufficient_delta) s << "  sufficient delta " << num(*r.sufficient_delta) << "\n";
  s << (r.all_passed ? "all hypotheses pass\n" : "hypotheses FAIL\n");
  return s.str();
}

int cmd_analyze(const Globals& g, std::ostream& out) {
  const auto c = resolve(g);
  const OutputDir dir(c.out_dir);
  const auto inst = make_instance(c);
  const auto report = analyze(inst, check_options(c));
  Json j = envelope("analyze", c);
  j["report"] = to_json(report);
  emit(g, c, dir, "analyze", j, analyze_summary(report), out);
  return report.all_passed ? kOk : kVerdictFailure;
}

// Refuses downstream commands for instances outside the theorem.
bool gate(const ProblemInstance& inst, const ExperimentConfig& c, Json& j, std::ostream& err) {
  const auto report = analyze(inst, check_options(c));
  j["hypotheses"] = to_json(report);
  if (report.all_passed) return true;
  std::string failing;
  for (const auto& e : report.conditions)
    if (!e.passed) failing += " " + e.name;
  for (const auto& cert : report.certificates)
    if (cert.status == CertificateStatus::failed) failing += " " + cert.name;
  err << "refusing: " << inst.name << " violates the hypotheses (" << failing.substr(1) << ")\n";
  j["refused"] = true;
  j["refusal_reason"] = "hypotheses fail:" + failing;
  return false;
}

int cmd_integrate(const Globals& g, std::ostream& out) {
  const auto c = resolve(g);
  const OutputDir dir(c.out_dir);
  const auto inst = make_instance(c);
  const auto opts = integration_options(c);
  const auto lambdas = c.lambda_values.empty() ? lambda_grid(c.lambda_min, c.lambda_max, c.points_per_decade)
                                               : c.lambda_values;
  Json results = Json::array();
  std::ostringstream s;
  bool failed = false;
  for (const auto& nu : inst.parameters_or_default()) {
    for (double lambda : lambdas) {
      try {
        IntegralResult r;
        if (c.method == "direct")
          r = integrate_direct(inst, lambda, nu, opts);
        else if (c.method == "radial")
          r = integrate_radial(inst, lambda, nu, opts);
        else
          r = integrate(inst, lambda, nu, opts);
        results.push_back(integral_json(lambda, nu, r));
        s << "lambda=" << num(lambda) << "  I=" << num(r.value.real()) << (r.value.imag() < 0 ? " - " : " + ")
          << num(std::abs(r.value.imag())) << "i  err=" << num(r.error_estimate) << "  "
          << to_string(r.method) << "\n";
      } catch (const BudgetExhausted& e) {
        failed = true;
        Json row{{"lambda", lambda}, {"nu", nu.coords}, {"error", e.what()}};
        row["partial"] = complex_json(e.partial().value);
        results.push_back(row);
        s << "lambda=" << num(lambda) << "  " << e.what() << "\n";
      }
    }
  }
  Json j = envelope("integrate", c);
  j["results"] = results;
  emit(g, c, dir, "integrate", j, s.str(), out);
  return failed ? kVerdictFailure : kOk;
}

struct SweepArtifacts {
  SweepResult sweep;
  std::optional<DecayFit> fit;
  std::string fit_error;
  Json per_nu = Json::array();
  BoundCertificate certificate;
};

SweepArtifacts run_sweep(const ProblemInstance& inst, const ExperimentConfig& c) {
  SweepArtifacts a;
  a.sweep = lambda_sweep(inst, c.lambda_min, c.lambda_max, c.points_per_decade, integration_options(c));
  try {
    a.fit = fit_power_law(a.sweep, c.tail_fraction);
    for (std::size_t k = 0; k < a.sweep.nus.size(); ++k) {
      Json f = to_json(fit_power_law(a.sweep, c.tail_fraction, k));
      f["nu"] = a.sweep.nus[k].coords;
      a.per_nu.push_back(f);
    }
  } catch (const Error& e) {
    a.fit_error = e.what();
  }
  a.certificate = certify_bound(a.sweep, inst.dim, inst.gamma);
  return a;
}

std::string sweep_csv(const SweepResult& s, double rate) {
  std::ostringstream csv;
  csv << "lambda,nu_index,abs_I,err,bound_product\n";
  for (std::size_t k = 0; k < s.nus.size(); ++k)
    for (std::size_t i = 0; i < s.lambdas.size(); ++i)
      csv << num(s.lambdas[i]) << "," << k << "," << num(s.magnitudes[k][i]) << "," << num(s.error_estimates[k][i])
          << "," << num(s.magnitudes[k][i] * std::pow(1.0 + s.lambdas[i], rate)) << "\n";
  return csv.str();
}

void write_sweep_files(const SweepArtifacts& a, const ExperimentConfig& c, const OutputDir& dir, const Json& fit_json,
                       const Json& cert_json) {
  if (!dir.enabled()) return;
  if (c.wants("csv")) dir.write("sweep.csv", sweep_csv(a.sweep, a.certificate.rate));
  if (c.wants("json")) {
    dir.write("fit.json", fit_json.dump(2) + "\n");
    dir.write("certificate.json", cert_json.dump(2) + "\n");
  }
  if (c.wants("plot"))
    for (std::size_t k = 0; k < a.sweep.nus.size(); ++k) {
      std::ostringstream dat;
      dat << "# lambda abs_I\n";
      for (std::size_t i = 0; i < a.sweep.lambdas.size(); ++i)
        dat << num(a.sweep.lambdas[i]) << " " << num(a.sweep.magnitudes[k][i]) << "\n";
      dir.write("plot_nu" + std::to_string(k) + ".dat", dat.str());
    }
}

Json fit_section(const SweepArtifacts& a, const ProblemInstance& inst, const ExperimentConfig& c) {
  Json j;
  j["partial"] = a.sweep.partial();
  if (a.sweep.partial()) j["failure"] = a.sweep.failure;
  if (a.fit) {
    j["fit"] = to_json(*a.fit);
    j["fits_per_nu"] = a.per_nu;
    const auto v = compare_rates(*a.fit, inst.dim, inst.gamma, c.tol_exp);
    j["rate_verdict"] = {{"holds", v.holds}, {"explanation", v.explanation}};
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = a.fit_error;
  }
  return j;
}

int cmd_sweep(const Globals& g, std::ostream& out) {
  const auto c = resolve(g);
  const OutputDir dir(c.out_dir);
  const auto inst = make_instance(c);
  const auto a = run_sweep(inst, c);

  Json j = envelope("sweep", c);
  const Json fit = fit_section(a, inst, c);
  for (const auto& [k, v] : fit.items()) j[k] = v;
  j["certificate"] = to_json(a.certificate);
  write_sweep_files(a, c, dir, fit, to_json(a.certificate));

  std::ostringstream s;
  if (!dir.enabled())
    s << sweep_csv(a.sweep, a.certificate.rate);
  else
    s << "wrote sweep artifacts to " << c.out_dir << "\n";
  if (a.fit) s << "# exponent " << num(a.fit->exponent) << "  (N/gamma = " << num(a.certificate.rate) << ")\n";
  if (!a.fit_error.empty()) s << "# fit failed: " << a.fit_error << "\n";
  if (a.sweep.partial()) s << "# partial sweep: " << a.sweep.failure << "\n";
  if (dir.enabled() && c.wants("json")) dir.write("sweep.json", j.dump(2) + "\n");
  if (g.json)
    out << j.dump(2) << "\n";
  else
    out << s.str();
  return (a.sweep.partial() || !a.fit) ? kVerdictFailure : kOk;
}

int cmd_certify(const Globals& g, std::ostream& out, std::ostream& err) {
  const auto c = resolve(g);
  const OutputDir dir(c.out_dir);
  const auto inst = make_instance(c);
  Json j = envelope("certify", c);
  if (!gate(inst, c, j, err)) {
    emit(g, c, dir, "certify", j, "certification refused\n", out);
    return kVerdictFailure;
  }
  const auto a = run_sweep(inst, c);
  const Json fit = fit_section(a, inst, c);
  for (const auto& [k, v] : fit.items()) j[k] = v;
  j["certificate"] = to_json(a.certificate);

  const bool finite = std::isfinite(a.certificate.sup_product);
  const bool flat = a.certificate.top_decade_slope <= c.slope_tol;
  const bool rate = a.fit && compare_rates(*a.fit, inst.dim, inst.gamma, c.tol_exp).holds;
  const bool ok = finite && flat && rate && !a.sweep.partial();
  j["verdict"] = {{"certified", ok},
                  {"sup_finite", finite},
                  {"top_decade_slope_ok", flat},
                  {"rate_ok", rate},
                  {"certified_range", {a.certificate.lambda_min, a.certificate.lambda_max}}};
  write_sweep_files(a, c, dir, fit, j);

  std::ostringstream s;
  s << inst.name << ": sup |I|(1+lambda)^" << num(a.certificate.rate) << " = " << num(a.certificate.sup_product)
    << " on lambda in [" << num(a.certificate.lambda_min) << ", " << num(a.certificate.lambda_max) << "]\n"
    << "  top decade slope " << num(a.certificate.top_decade_slope) << "  " << verdict_word(flat) << "\n";
  if (a.fit) s << "  fitted exponent " << num(a.fit->exponent) << "  " << verdict_word(rate) << "\n";
  if (!a.fit_error.empty()) s << "  fit failed: " << a.fit_error << "\n";
  s << (ok ? "certified\n" : "NOT certified\n");
  emit(g, c, dir, "certify", j, s.str(), out);
  return ok ? kOk : kVerdictFailure;
}

int cmd_sublevel(const Globals& g, std::ostream& out) {
  const auto c = resolve(g);
  const OutputDir dir(c.out_dir);
  const auto inst = make_instance(c);
  SublevelOptions o;
  o.method = c.sublevel_method == "grid" ? SublevelMethod::grid : SublevelMethod::monte_carlo;
  o.samples = c.sublevel_samples;
  o.seed = c.seed;
  const auto ts = c.sublevel_grid();

  Json j = envelope("sublevel", c);
  j["seed"] = c.seed;
  j["method"] = to_string(o.method);
  j["samples"] = o.samples;
  std::vector<SublevelEstimate> estimates;
  bool fit_ok = true;
  try {
    const auto fit = sublevel_fit(inst, ts, o);
    estimates = fit.estimates;
    j["fit"] = to_json(fit);
  } catch (const Error& e) {
    fit_ok = false;
    j["fit"] = nullptr;
    j["fit_error"] = e.what();
    if (e.kind() == ErrorKind::invalid_argument) throw;
    estimates.clear();
    for (double t : ts) estimates.push_back(sublevel_measure(inst, t, o));
    Json est = Json::array();
    for (const auto& e2 : estimates) est.push_back(to_json(e2));
    j["estimates"] = est;
  }

  std::ostringstream csv;
  csv << "t,measure,std_error\n";
  for (const auto& e : estimates) csv << num(e.t) << "," << num(e.measure) << "," << num(e.std_error) << "\n";
  if (dir.enabled()) {
    if (c.wants("csv")) dir.write("sublevel.csv", csv.str());
    if (c.wants("json")) dir.write("sublevel.json", j.dump(2) + "\n");
  }
  if (g.json)
    out << j.dump(2) << "\n";
  else if (!dir.enabled())
    out << csv.str();
  else
    out << "wrote sublevel artifacts to " << c.out_dir << "\n";
  return fit_ok ? kOk : kVerdictFailure;
}

int cmd_ibp_verify(const Globals& g, std::ostream& out, std::ostream& err) {
  const auto c = resolve(g);
  const OutputDir dir(c.out_dir);
  const auto inst = make_instance(c);
  Json j = envelope("ibp-verify", c);
  if (!gate(inst, c, j, err)) {
    emit(g, c, dir, "ibp-verify", j, "ibp verification refused\n", out);
    return kVerdictFailure;
  }
  const int l = c.ibp_order.value_or(default_ibp_order(inst.dim, inst.gamma));
  const auto lambdas = c.lambda_values.empty() ? std::vector<double>{1e2, 1e3, 1e4} : c.lambda_values;
  const auto opts = integration_options(c);

  Json terms = Json::array();
  bool constraint_ok = true;
  for (const auto& t : ibp_terms(l)) {
    int sum = t.r - t.p;
    for (int s : t.s) sum += s;
    constraint_ok = constraint_ok && sum == l;
    terms.push_back(to_json(t));
  }

  Json rows = Json::array();
  double worst = 0.0;
  std::ostringstream s;
  for (const auto& nu : inst.parameters_or_default())
    for (const auto& node : sphere_grid(inst.dim, c.sphere_resolution))
      for (double lambda : lambdas) {
        if (lambda < 1.0) throw ConfigError("lambda.values: ibp-verify needs lambda >= 1");
        const auto split = split_I1_I2(inst, lambda, node.omega, nu, opts);
        const auto ibp = ibp_evaluate_I2(inst, lambda, node.omega, nu, l, opts);
        const double scale = std::abs(split.i2.value);
        const double diff = std::abs(split.i2.value - ibp.value);
        const double rel = scale > 0.0 ? diff / scale : diff;
        worst = std::max(worst, rel);
        rows.push_back({{"lambda", lambda},
                        {"omega", node.omega.vec()},
                        {"nu", nu.coords},
                        {"split_I2", complex_json(split.i2.value)},
                        {"ibp_I2", complex_json(ibp.value)},
                        {"relative_discrepancy", rel}});
      }
  const bool ok = constraint_ok && worst <= c.ibp_rel_tol;
  j["l"] = l;
  j["terms"] = terms;
  j["index_constraint_holds"] = constraint_ok;
  j["rows"] = rows;
  j["max_relative_discrepancy"] = worst;
  j["tolerance"] = c.ibp_rel_tol;
  j["agrees"] = ok;
  s << inst.name << ": l=" << l << ", " << terms.size() << " terms, max relative discrepancy " << num(worst)
    << " (tolerance " << num(c.ibp_rel_tol) << ")  " << verdict_word(ok) << "\n";
  emit(g, c, dir, "ibp-verify", j, s.str(), out);
  return ok ? kOk : kVerdictFailure;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_argument:
    case ErrorKind::catalog_miss:
    case ErrorKind::unsupported_order:
      return kConfigError;
    default:
      return kVerdictFailure;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"corput: oscillatory integrals and the multidimensional van der Corput bound"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "experiment config (INI)");
  app.add_option("--out", g.out_dir, "directory for reports and artifacts");
  app.add_flag("--json", g.json, "machine-readable output on stdout");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"catalog", "list catalog instances and their parameters"},
      {"analyze", "check hypotheses A1-A4, F1-F4 and the proof inequalities"},
      {"integrate", "evaluate I(lambda, nu)"},
      {"sweep", "sweep lambda, fit the decay exponent, bound the product"},
      {"certify", "certify |I| <= C (1+lambda)^(-N/gamma) on the sampled range"},
      {"sublevel", "sublevel set measures and their power law"},
      {"ibp-verify", "compare I2 from the split against the integration by parts expansion"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "catalog") return cmd_catalog(g, out);
    if (name == "analyze") return cmd_analyze(g, out);
    if (name == "integrate") return cmd_integrate(g, out);
    if (name == "sweep") return cmd_sweep(g, out);
    if (name == "certify") return cmd_certify(g, out, err);
    if (name == "sublevel") return cmd_sublevel(g, out);
    if (name == "ibp-verify") return cmd_ibp_verify(g, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  }
  return kConfigError;
}

}  // namespace corput::cli
