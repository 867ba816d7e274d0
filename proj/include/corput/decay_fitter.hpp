#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corput/osc_integrator.hpp"
#include "corput/phase_model.hpp"

namespace corput {

struct SweepResult {
  std::string instance_id;
  std::vector<double> lambdas;
  std::vector<ParameterPoint> nus;
  std::vector<std::vector<double>> magnitudes;       // [nu][lambda]
  std::vector<std::vector<double>> error_estimates;  // [nu][lambda]
  std::string failure;                               // set when the sweep was truncated

  bool partial() const { return !failure.empty(); }
};

/// Log-spaced grid from lambda_min to lambda_max with the given density; a
/// zero lambda_min contributes lambda = 0 followed by a grid starting at 1.
std::vector<double> lambda_grid(double lambda_min, double lambda_max, int points_per_decade);

/// |I(lambda, nu)| over the grid for every parameter sample. Radial quadrature
/// for N >= 2, direct for N = 1. A budget failure truncates the sweep before
/// the first failing lambda and records why.
SweepResult lambda_sweep(const ProblemInstance& instance, double lambda_min, double lambda_max,
                         int points_per_decade, const IntegrationOptions& options = {});

struct DecayFit {
  double exponent = 0.0;      // |I| ~ C lambda^{-exponent}
  double log_constant = 0.0;  // ln C
  double residual_rms = 0.0;
  double tail_fraction_used = 0.5;
  std::size_t points_used = 0;
  bool used_envelope = false;
  double lambda_from = 0.0;
  double lambda_to = 0.0;
};

/// Least squares line through (ln lambda, ln |I|) on the last `tail_fraction`
/// of the positive lambdas. Refits on the 3-point running max when the
/// residual rms exceeds 0.2.
DecayFit fit_power_law(std::span<const double> lambdas, std::span<const double> magnitudes,
                       std::span<const double> errors, double tail_fraction = 0.5);

/// Fits one parameter sample, or the max over samples when nu_index is empty.
DecayFit fit_power_law(const SweepResult& sweep, double tail_fraction = 0.5,
                       std::optional<std::size_t> nu_index = std::nullopt);

struct BoundCertificate {
  double rate = 0.0;  // N / gamma
  double sup_product = 0.0;
  double attained_lambda = 0.0;
  std::size_t attained_nu_index = 0;
  std::vector<double> attained_nu;
  double lambda_min = 0.0;  // certified range
  double lambda_max = 0.0;
  std::size_t nu_count = 0;
  /// Log-log slope of max_nu |I|(1+lambda)^rate over the top decade.
  double top_decade_slope = 0.0;
};

/// sup over the (lambda, nu) grid of |I| (1 + lambda)^{N/gamma}.
BoundCertificate certify_bound(const SweepResult& sweep, int dim, int gamma);

struct RateVerdict {
  bool holds = false;
  std::string explanation;
};

/// exponent >= N/gamma - tol_exp.
RateVerdict compare_rates(const DecayFit& fit, int dim, int gamma, double tol_exp);

/// Ordinary least squares slope and intercept.
std::pair<double, double> least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace corput
