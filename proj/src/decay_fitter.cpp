#include "corput/decay_fitter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corput/error.hpp"
#include "corput/parallel.hpp"
#include "corput/quadrature.hpp"

namespace corput {
namespace {

double rms_residual(std::span<const double> x, std::span<const double> y, double slope,
                    double intercept) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

std::pair<double, double> least_squares_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::invalid_argument, "line fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::degenerate_fit, "all abscissae coincide");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::vector<double> lambda_grid(double lambda_min, double lambda_max, int points_per_decade) {
  if (!(lambda_min >= 0.0) || !(lambda_max > lambda_min) || !std::isfinite(lambda_max))
    throw Error(ErrorKind::invalid_argument, "need 0 <= lambda_min < lambda_max");
  if (points_per_decade < 1) throw Error(ErrorKind::invalid_argument, "points_per_decade must be >= 1");
  std::vector<double> grid;
  double start = lambda_min;
  if (lambda_min == 0.0) {
    grid.push_back(0.0);
    start = std::min(1.0, lambda_max);
    if (start == lambda_max) {
      grid.push_back(lambda_max);
      return grid;
    }
  }
  const double decades = std::log10(lambda_max / start);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * points_per_decade - 1e-9)));
  for (int i = 0; i <= steps; ++i) {
    double v = start * std::pow(10.0, decades * i / steps);
    if (i == steps) v = lambda_max;
    grid.push_back(v);
  }
  return grid;
}

SweepResult lambda_sweep(const ProblemInstance& instance, double lambda_min, double lambda_max,
                         int points_per_decade, const IntegrationOptions& options) {
  SweepResult out;
  out.instance_id = instance.name;
  out.lambdas = lambda_grid(lambda_min, lambda_max, points_per_decade);
  out.nus = instance.parameters_or_default();
  const std::size_t nl = out.lambdas.size();
  const std::size_t nn = out.nus.size();
  out.magnitudes.assign(nn, std::vector<double>(nl, 0.0));
  out.error_estimates.assign(nn, std::vector<double>(nl, 0.0));
  std::vector<std::string> failures(nl * nn);

  parallel_for(nl * nn, [&](std::size_t task) {
    const std::size_t il = task / nn;
    const std::size_t iv = task % nn;
    try {
      const double lambda = out.lambdas[il];
      IntegralResult r = instance.dim >= 2 ? integrate_radial(instance, lambda, out.nus[iv], options)
                                           : integrate_direct(instance, lambda, out.nus[iv], options);
      out.magnitudes[iv][il] = std::abs(r.value);
      out.error_estimates[iv][il] = r.error_estimate;
    } catch (const BudgetExhausted& e) {
      failures[task] = e.what();
    }
  });

  for (std::size_t task = 0; task < failures.size(); ++task) {
    if (failures[task].empty()) continue;
    const std::size_t il = task / nn;
    std::ostringstream os;
    os << "truncated at lambda=" << out.lambdas[il] << " (nu index " << task % nn
       << "): " << failures[task];
    out.failure = os.str();
    out.lambdas.resize(il);
    for (auto& row : out.magnitudes) row.resize(il);
    for (auto& row : out.error_estimates) row.resize(il);
    break;
  }
  return out;
}

DecayFit fit_power_law(std::span<const double> lambdas, std::span<const double> magnitudes,
                       std::span<const double> errors, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw Error(ErrorKind::invalid_argument, "tail_fraction must lie in (0, 1]");
  if (magnitudes.size() != lambdas.size() || errors.size() != lambdas.size())
    throw Error(ErrorKind::invalid_argument, "sweep columns differ in length");
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (lambdas[i] > 0.0) positive.push_back(i);
  const std::size_t take = static_cast<std::size_t>(
      std::ceil(tail_fraction * static_cast<double>(positive.size()) - 1e-9));
  if (take < 4 || positive.size() < 4)
    throw Error(ErrorKind::invalid_argument,
                "power-law fit needs at least 4 tail points, have " + std::to_string(take));
  std::vector<std::size_t> tail(positive.end() - take, positive.end());

  std::vector<double> x, y;
  for (std::size_t i : tail) {
    if (!(magnitudes[i] > 10.0 * errors[i]) || !(magnitudes[i] > 0.0)) {
      std::ostringstream os;
      os << "|I|=" << magnitudes[i] << " at lambda=" << lambdas[i]
         << " is within 10x of its error estimate " << errors[i]
         << "; tighten the quadrature tolerance or shrink the lambda range";
      throw Error(ErrorKind::noise_floor, os.str());
    }
    x.push_back(std::log(lambdas[i]));
    y.push_back(std::log(magnitudes[i]));
  }
  auto [slope, intercept] = least_squares_line(x, y);
  DecayFit fit;
  fit.residual_rms = rms_residual(x, y, slope, intercept);
  fit.tail_fraction_used = tail_fraction;
  fit.points_used = x.size();
  fit.lambda_from = lambdas[tail.front()];
  fit.lambda_to = lambdas[tail.back()];
  if (fit.residual_rms > 0.2) {
    std::vector<double> envelope(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = std::min(y.size() - 1, i + 1);
      envelope[i] = *std::max_element(y.begin() + lo, y.begin() + hi + 1);
    }
    std::tie(slope, intercept) = least_squares_line(x, envelope);
    fit.residual_rms = rms_residual(x, envelope, slope, intercept);
    fit.used_envelope = true;
  }
  fit.exponent = -slope;
  fit.log_constant = intercept;
  return fit;
}

DecayFit fit_power_law(const SweepResult& sweep, double tail_fraction,
                       std::optional<std::size_t> nu_index) {
  if (sweep.magnitudes.empty()) throw Error(ErrorKind::invalid_argument, "empty sweep");
  if (nu_index) {
    if (*nu_index >= sweep.magnitudes.size())
      throw Error(ErrorKind::invalid_argument, "nu index out of range");
    return fit_power_law(sweep.lambdas, sweep.magnitudes[*nu_index],
                         sweep.error_estimates[*nu_index], tail_fraction);
  }
  const std::size_t n = sweep.lambdas.size();
  std::vector<double> mag(n, 0.0), err(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t v = 0; v < sweep.magnitudes.size(); ++v)
      if (sweep.magnitudes[v][i] >= mag[i]) {
        mag[i] = sweep.magnitudes[v][i];
        err[i] = sweep.error_estimates[v][i];
      }
  return fit_power_law(sweep.lambdas, mag, err, tail_fraction);
}

BoundCertificate certify_bound(const SweepResult& sweep, int dim, int gamma) {
  if (sweep.lambdas.empty() || sweep.magnitudes.empty())
    throw Error(ErrorKind::invalid_argument, "cannot certify an empty sweep");
  if (dim < 1 || gamma < 1) throw Error(ErrorKind::invalid_argument, "need N >= 1 and gamma >= 1");
  BoundCertificate c;
  c.rate = static_cast<double>(dim) / gamma;
  c.lambda_min = sweep.lambdas.front();
  c.lambda_max = sweep.lambdas.back();
  c.nu_count = sweep.magnitudes.size();
  const std::size_t n = sweep.lambdas.size();
  std::vector<double> envelope(n, 0.0);
  c.sup_product = -1.0;
  for (std::size_t v = 0; v < sweep.magnitudes.size(); ++v)
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sweep.magnitudes[v][i] * std::pow(1.0 + sweep.lambdas[i], c.rate);
      envelope[i] = std::max(envelope[i], p);
      if (p > c.sup_product) {
        c.sup_product = p;
        c.attained_lambda = sweep.lambdas[i];
        c.attained_nu_index = v;
        c.attained_nu = v < sweep.nus.size() ? sweep.nus[v].coords : std::vector<double>{};
      }
    }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i)
    if (sweep.lambdas[i] > 0.0 && sweep.lambdas[i] >= c.lambda_max / 10.0 * (1.0 - 1e-12) &&
        envelope[i] > 0.0) {
      x.push_back(std::log(sweep.lambdas[i]));
      y.push_back(std::log(envelope[i]));
    }
  c.top_decade_slope = x.size() >= 2 ? least_squares_line(x, y).first : 0.0;
  return c;
}

RateVerdict compare_rates(const DecayFit& fit, int dim, int gamma, double tol_exp) {
  const double target = static_cast<double>(dim) / gamma;
  const double one_dim = 1.0 / gamma;
  RateVerdict v;
  v.holds = fit.exponent >= target - tol_exp;
  std::ostringstream os;
  os << "fitted exponent " << fit.exponent << (v.holds ? " meets" : " misses")
     << " the rate N/gamma = " << target << " (tolerance " << tol_exp
     << "); the one-dimensional van der Corput rate is 1/gamma = " << one_dim;
  if (!v.holds && fit.exponent >= one_dim - tol_exp && dim > 1)
    os << ", so only the one-dimensional rate is achieved";
  v.explanation = os.str();
  return v;
}

}  // namespace corput
