#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corput/phase_model.hpp"

namespace corput {

enum class SublevelMethod { grid, monte_carlo };

std::string_view to_string(SublevelMethod method);

struct SublevelEstimate {
  double t = 0.0;
  double measure = 0.0;
  double std_error = 0.0;
  SublevelMethod method = SublevelMethod::grid;
  std::size_t sample_count = 0;
};

struct SublevelOptions {
  SublevelMethod method = SublevelMethod::grid;
  /// Grid: cells per axis. Monte Carlo: total number of samples.
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  /// Parameter sample used for Phi; empty means the instance's first sample.
  std::optional<ParameterPoint> nu;
};

/// meas{x in [-delta/2, delta/2]^N : |Phi(x)| <= t} for a real-valued phase.
///
/// The grid method counts cell centers and reports half the volume of cells
/// on the level-set boundary as its error; Monte Carlo samples uniformly in
/// fixed-size batches seeded by (seed, batch) and reports the binomial
/// standard error.
SublevelEstimate sublevel_measure(const ProblemInstance& instance, double t,
                                  const SublevelOptions& options = {});

struct SublevelFit {
  double exponent = 0.0;  // measure ~ constant * t^exponent
  double constant = 0.0;
  double residual_rms = 0.0;
  std::vector<SublevelEstimate> estimates;  // in the order of the t grid
  std::string unchecked_assumption;
};

/// Log-log fit of measure against t. The grid needs >= 4 points spanning at
/// least two decades; a zero measure is a degenerate fit.
SublevelFit sublevel_fit(const ProblemInstance& instance, const std::vector<double>& t_grid,
                         const SublevelOptions& options = {});

}  // namespace corput
