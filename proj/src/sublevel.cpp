#include "corput/sublevel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "corput/decay_fitter.hpp"
#include "corput/error.hpp"
#include "corput/parallel.hpp"

namespace corput {
namespace {

constexpr std::size_t kBatch = 4096;

double real_phase(const ProblemInstance& instance, std::span<const double> x,
                  const ParameterPoint& nu) {
  const Complex v = eval_phase(instance, x, nu);
  if (std::abs(v.imag()) > 1e-12)
    throw Error(ErrorKind::invalid_argument,
                "sublevel sets need a real phase; Im Phi = " + std::to_string(v.imag()));
  return v.real();
}

SublevelEstimate grid_estimate(const ProblemInstance& instance, double t,
                               const ParameterPoint& nu, std::size_t per_axis) {
  const int dim = instance.dim;
  const double half = 0.5 * instance.cutoff.delta;
  const double h = 2.0 * half / per_axis;
  const double cell = std::pow(h, dim);
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= per_axis;

  std::vector<unsigned char> inside(total);
  const std::size_t chunks = std::min<std::size_t>(total, 64);
  parallel_for(chunks, [&](std::size_t c) {
    Point x(dim);
    for (std::size_t code = c * total / chunks; code < (c + 1) * total / chunks; ++code) {
      std::size_t rem = code;
      for (int i = 0; i < dim; ++i) {
        x[i] = -half + (static_cast<double>(rem % per_axis) + 0.5) * h;
        rem /= per_axis;
      }
      inside[code] = std::abs(real_phase(instance, x, nu)) <= t;
    }
  });

  std::size_t count = 0, boundary = 0;
  for (std::size_t code = 0; code < total; ++code) {
    count += inside[code];
    std::size_t stride = 1;
    bool edge = false;
    for (int i = 0; i < dim && !edge; ++i) {
      const std::size_t k = (code / stride) % per_axis;
      if (k > 0 && inside[code - stride] != inside[code]) edge = true;
      if (k + 1 < per_axis && inside[code + stride] != inside[code]) edge = true;
      stride *= per_axis;
    }
    boundary += edge;
  }
  return SublevelEstimate{t, count * cell, 0.5 * boundary * cell, SublevelMethod::grid, total};
}

SublevelEstimate monte_carlo_estimate(const ProblemInstance& instance, double t,
                                      const ParameterPoint& nu, std::size_t samples,
                                      std::uint64_t seed) {
  const int dim = instance.dim;
  const double half = 0.5 * instance.cutoff.delta;
  const std::size_t batches = (samples + kBatch - 1) / kBatch;
  std::vector<std::size_t> hits(batches, 0);
  parallel_for(batches, [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uniform(-half, half);
    const std::size_t n = std::min(kBatch, samples - b * kBatch);
    Point x(dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& c : x) c = uniform(rng);
      hits[b] += std::abs(real_phase(instance, x, nu)) <= t;
    }
  });
  std::size_t count = 0;
  for (std::size_t h : hits) count += h;
  const double volume = std::pow(2.0 * half, dim);
  const double p = static_cast<double>(count) / samples;
  return SublevelEstimate{t, volume * p, volume * std::sqrt(p * (1.0 - p) / samples),
                          SublevelMethod::monte_carlo, samples};
}

}  // namespace

std::string_view to_string(SublevelMethod method) {
  return method == SublevelMethod::grid ? "grid" : "monte_carlo";
}

SublevelEstimate sublevel_measure(const ProblemInstance& instance, double t,
                                  const SublevelOptions& options) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::invalid_argument, "t must be positive");
  if (options.samples < 1) throw Error(ErrorKind::invalid_argument, "need at least one sample");
  const ParameterPoint nu = options.nu.value_or(instance.parameters_or_default().front());
  if (options.method == SublevelMethod::grid)
    return grid_estimate(instance, t, nu, options.samples);
  return monte_carlo_estimate(instance, t, nu, options.samples, options.seed);
}

SublevelFit sublevel_fit(const ProblemInstance& instance, const std::vector<double>& t_grid,
                         const SublevelOptions& options) {
  if (t_grid.size() < 4) throw Error(ErrorKind::invalid_argument, "t grid needs at least 4 points");
  const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
  if (!(*lo > 0.0) || *hi / *lo < 100.0 * (1.0 - 1e-12))
    throw Error(ErrorKind::invalid_argument, "t grid must be positive and span two decades");

  SublevelFit fit;
  std::vector<double> x, y;
  for (double t : t_grid) {
    auto e = sublevel_measure(instance, t, options);
    if (!(e.measure > 0.0))
      throw Error(ErrorKind::degenerate_fit,
                  "zero sublevel measure at t=" + std::to_string(t) + "; refine the sampling");
    fit.estimates.push_back(e);
    x.push_back(std::log(t));
    y.push_back(std::log(e.measure));
  }
  auto sorted = fit.estimates;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].measure < sorted[i - 1].measure)
      throw Error(ErrorKind::degenerate_fit, "sublevel measure decreased as t grew");

  auto [slope, intercept] = least_squares_line(x, y);
  fit.exponent = slope;
  fit.constant = std::exp(intercept);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(y[i] - slope * x[i] - intercept, 2);
  fit.residual_rms = std::sqrt(s / x.size());
  fit.unchecked_assumption =
      "the growth law presumes |Phi^(k)| >= 1 on the region; this is not verified";
  return fit;
}

}  // namespace corput
