#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corput/phase_model.hpp"
#include "corput/report_json.hpp"

namespace corput::cli {

// Bad config contents (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable config or unwritable output (exit 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string source;  // path the config was read from, empty for defaults

  std::string instance = "fresnel";
  ParamMap params;

  double lambda_min = 0.0;
  double lambda_max = 1000.0;
  int points_per_decade = 8;
  std::vector<double> lambda_values;  // explicit list for integrate / ibp-verify

  double quadrature_tol = 1e-10;
  double fd_tol = 1e-6;
  double f1_tol = 1e-8;
  double c_min = 1e-3;
  double tol_exp = 0.05;
  double ibp_rel_tol = 1e-3;
  double slope_tol = 0.05;

  int sphere_resolution = 32;
  std::uint64_t seed = 0;
  double tail_fraction = 0.5;
  std::optional<int> ibp_order;
  std::string method = "auto";  // auto | direct | radial
  std::size_t max_panels = std::size_t{1} << 16;

  std::vector<double> sublevel_t;
  std::string sublevel_method = "grid";
  std::size_t sublevel_samples = 1000;

  std::string out_dir;
  std::vector<std::string> artifacts = {"csv", "json", "plot"};

  bool wants(const std::string& artifact) const;
  std::vector<double> sublevel_grid() const;
  Json to_json() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");

}  // namespace corput::cli
