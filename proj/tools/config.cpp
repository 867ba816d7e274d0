#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace corput::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// values may carry a trailing "; comment"
std::string strip_comment(const std::string& raw) {
  const auto pos = raw.find_first_of(";#");
  return trim(pos == std::string::npos ? raw : raw.substr(0, pos));
}

double parse_double(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(field + ": expected a finite number, got '" + s + "'");
  return v;
}

long long parse_int(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError(field + ": expected an integer, got '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(field, item));
  if (out.empty()) throw ConfigError(field + ": empty list");
  return out;
}

std::vector<std::string> parse_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void require_positive(const std::string& field, double v) {
  if (!(v > 0.0)) throw ConfigError(field + ": must be positive");
}

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"lambda", {"min", "max", "points_per_decade", "values"}},
    {"tolerances", {"quadrature", "fd", "f1", "c_min", "tol_exp", "ibp_rel_tol", "slope"}},
    {"run", {"sphere_resolution", "seed", "tail_fraction", "ibp_order", "method", "max_panels"}},
    {"sublevel", {"t", "method", "samples"}},
    {"outputs", {"dir", "artifacts"}},
};

}  // namespace

bool ExperimentConfig::wants(const std::string& artifact) const {
  return std::find(artifacts.begin(), artifacts.end(), artifact) != artifacts.end();
}

std::vector<double> ExperimentConfig::sublevel_grid() const {
  if (!sublevel_t.empty()) return sublevel_t;
  std::vector<double> t;
  for (int i = 0; i <= 12; ++i) t.push_back(std::pow(10.0, -i / 4.0));
  return t;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["source"] = source;
  Json params_json = Json::object();
  for (const auto& [k, v] : params) params_json[k] = v;
  j["instance"] = {{"name", instance}, {"params", params_json}};
  j["lambda"] = {{"min", lambda_min},
                 {"max", lambda_max},
                 {"points_per_decade", points_per_decade},
                 {"values", lambda_values}};
  j["tolerances"] = {{"quadrature", quadrature_tol}, {"fd", fd_tol},   {"f1", f1_tol},
                     {"c_min", c_min},               {"tol_exp", tol_exp}, {"ibp_rel_tol", ibp_rel_tol},
                     {"slope", slope_tol}};
  j["run"] = {{"sphere_resolution", sphere_resolution},
              {"seed", seed},
              {"tail_fraction", tail_fraction},
              {"ibp_order", ibp_order ? Json(*ibp_order) : Json(nullptr)},
              {"method", method},
              {"max_panels", max_panels}};
  j["sublevel"] = {{"t", sublevel_grid()}, {"method", sublevel_method}, {"samples", sublevel_samples}};
  j["outputs"] = {{"dir", out_dir}, {"artifacts", artifacts}};
  return j;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  ExperimentConfig c;
  c.source = source;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' must sit inside a [section]");
    if (section != "instance" && !kKnownKeys.count(section))
      throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      const std::string value = strip_comment(node.data());
      if (section == "instance") {
        if (key == "name")
          c.instance = value;
        else
          c.params[key] = parse_list(field, value);
        continue;
      }
      if (!kKnownKeys.at(section).count(key)) throw ConfigError("unknown field " + field);

      if (field == "lambda.min") c.lambda_min = parse_double(field, value);
      else if (field == "lambda.max") c.lambda_max = parse_double(field, value);
      else if (field == "lambda.points_per_decade") c.points_per_decade = static_cast<int>(parse_int(field, value));
      else if (field == "lambda.values") c.lambda_values = parse_list(field, value);
      else if (field == "tolerances.quadrature") c.quadrature_tol = parse_double(field, value);
      else if (field == "tolerances.fd") c.fd_tol = parse_double(field, value);
      else if (field == "tolerances.f1") c.f1_tol = parse_double(field, value);
      else if (field == "tolerances.c_min") c.c_min = parse_double(field, value);
      else if (field == "tolerances.tol_exp") c.tol_exp = parse_double(field, value);
      else if (field == "tolerances.ibp_rel_tol") c.ibp_rel_tol = parse_double(field, value);
      else if (field == "tolerances.slope") c.slope_tol = parse_double(field, value);
      else if (field == "run.sphere_resolution") c.sphere_resolution = static_cast<int>(parse_int(field, value));
      else if (field == "run.seed") {
        const long long s = parse_int(field, value);
        if (s < 0) throw ConfigError(field + ": must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
      } else if (field == "run.tail_fraction") c.tail_fraction = parse_double(field, value);
      else if (field == "run.ibp_order") {
        if (!value.empty()) c.ibp_order = static_cast<int>(parse_int(field, value));
      } else if (field == "run.method") c.method = value;
      else if (field == "run.max_panels") {
        const long long n = parse_int(field, value);
        if (n < 1) throw ConfigError(field + ": must be at least 1");
        c.max_panels = static_cast<std::size_t>(n);
      } else if (field == "sublevel.t") c.sublevel_t = parse_list(field, value);
      else if (field == "sublevel.method") c.sublevel_method = value;
      else if (field == "sublevel.samples") {
        const long long n = parse_int(field, value);
        if (n < 1) throw ConfigError(field + ": must be at least 1");
        c.sublevel_samples = static_cast<std::size_t>(n);
      } else if (field == "outputs.dir") c.out_dir = value;
      else if (field == "outputs.artifacts") c.artifacts = parse_words(value);
    }
  }

  if (c.instance.empty()) throw ConfigError("instance.name: missing");
  if (!(c.lambda_min >= 0.0)) throw ConfigError("lambda.min: must be >= 0");
  if (!(c.lambda_max > c.lambda_min)) throw ConfigError("lambda.max: must exceed lambda.min");
  if (c.points_per_decade < 1) throw ConfigError("lambda.points_per_decade: must be >= 1");
  for (double l : c.lambda_values)
    if (l < 0.0) throw ConfigError("lambda.values: entries must be >= 0");
  require_positive("tolerances.quadrature", c.quadrature_tol);
  require_positive("tolerances.fd", c.fd_tol);
  require_positive("tolerances.f1", c.f1_tol);
  require_positive("tolerances.c_min", c.c_min);
  require_positive("tolerances.tol_exp", c.tol_exp);
  require_positive("tolerances.ibp_rel_tol", c.ibp_rel_tol);
  require_positive("tolerances.slope", c.slope_tol);
  if (c.sphere_resolution < 1) throw ConfigError("run.sphere_resolution: must be >= 1");
  if (!(c.tail_fraction > 0.0 && c.tail_fraction <= 1.0))
    throw ConfigError("run.tail_fraction: must lie in (0, 1]");
  if (c.ibp_order && *c.ibp_order < 1) throw ConfigError("run.ibp_order: must be >= 1");
  if (c.method != "auto" && c.method != "direct" && c.method != "radial")
    throw ConfigError("run.method: expected auto, direct or radial, got '" + c.method + "'");
  if (c.sublevel_method != "grid" && c.sublevel_method != "monte_carlo")
    throw ConfigError("sublevel.method: expected grid or monte_carlo, got '" + c.sublevel_method + "'");
  for (double t : c.sublevel_t)
    if (!(t > 0.0)) throw ConfigError("sublevel.t: entries must be positive");
  for (const auto& a : c.artifacts)
    if (a != "csv" && a != "json" && a != "plot")
      throw ConfigError("outputs.artifacts: unknown artifact '" + a + "'");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace corput::cli
