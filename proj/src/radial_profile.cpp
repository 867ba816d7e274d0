#include "corput/radial_profile.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "corput/error.hpp"
#include "corput/quadrature.hpp"

namespace corput {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Point ray_point(const ProblemInstance& instance, double t, const Direction& omega) {
  Point x = instance.center;
  auto w = omega.unit();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * w[i];
  return x;
}

void check_direction(const ProblemInstance& instance, const Direction& omega) {
  if (omega.dim() != instance.dim)
    throw Error(ErrorKind::invalid_argument, "direction dimension does not match N");
}

}  // namespace

Direction::Direction(std::vector<double> v) : unit_(std::move(v)) {
  if (unit_.empty()) throw Error(ErrorKind::invalid_argument, "empty direction");
  double n2 = 0.0;
  for (double c : unit_) {
    if (!std::isfinite(c)) throw Error(ErrorKind::invalid_argument, "non-finite direction");
    n2 += c * c;
  }
  if (n2 == 0.0) throw Error(ErrorKind::invalid_argument, "zero direction");
  const double n = std::sqrt(n2);
  for (double& c : unit_) c /= n;
}

Direction Direction::opposite() const {
  std::vector<double> v = unit_;
  for (double& c : v) c = -c;
  return Direction(std::move(v));
}

Complex radial_eval(const ProblemInstance& instance, double rho, const Direction& omega,
                    const ParameterPoint& nu) {
  if (!(rho >= 0.0)) throw Error(ErrorKind::invalid_argument, "rho must be >= 0");
  check_direction(instance, omega);
  return eval_phase(instance, ray_point(instance, rho, omega), nu);
}

DerivativeEstimate radial_derivative(const ProblemInstance& instance, double rho,
                                     const Direction& omega, const ParameterPoint& nu, int m,
                                     const DerivativeOptions& options) {
  const int limit = options.max_order > 0 ? options.max_order : instance.gamma + 1;
  if (m < 0 || m > limit)
    throw Error(ErrorKind::unsupported_order,
                "derivative order " + std::to_string(m) + " outside [0, " +
                    std::to_string(limit) + "]");
  if (!(rho >= 0.0) || rho > instance.radial_extent() * (1.0 + 1e-12))
    throw Error(ErrorKind::invalid_argument,
                "rho=" + std::to_string(rho) + " outside [0, " +
                    std::to_string(instance.radial_extent()) + "]");
  check_direction(instance, omega);

  if (options.mode == DerivativeMode::automatic && instance.phase.has_analytic_radial_derivatives()) {
    const Complex v = instance.phase.radial_derivative(rho, omega.unit(), nu, m);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::evaluation_failure, "closed-form radial derivative is not finite");
    return {v, 0.0};
  }

  auto line = [&](double t) { return eval_phase(instance, ray_point(instance, t, omega), nu); };
  if (m == 0) {
    const Complex v = line(rho);
    return {v, kEps * std::abs(v)};
  }

  const double step = std::pow(kEps, 1.0 / (m + 4)) * std::max(instance.cutoff.delta / 4.0, 1.0);
  auto approx = [&](double h) { return central_difference(line, rho, m, h); };
  Extrapolated e = richardson(approx, 8.0 * step);
  // Ridders' estimate misses cancellation in the stencil itself
  const double reach = 0.5 * m * e.step;
  const double scale = std::max({std::abs(line(rho)), std::abs(line(rho + reach)),
                                 std::abs(line(rho - reach))});
  const double roundoff = 4.0 * std::ldexp(kEps, m) * scale / std::pow(e.step, m);
  e.error = std::max({e.error, roundoff, 4.0 * kEps * std::abs(e.value)});
  if (e.error > options.tolerance * std::max(1.0, std::abs(e.value)))
    throw Error(ErrorKind::precision_failure,
                "order " + std::to_string(m) + " derivative at rho=" + std::to_string(rho) +
                    " has error estimate " + std::to_string(e.error));
  return {e.value, e.error};
}

TaylorData taylor_coefficients(const ProblemInstance& instance, const Direction& omega,
                               const ParameterPoint& nu, const DerivativeOptions& options) {
  TaylorData t;
  t.gamma = instance.gamma;
  t.omega = omega;
  t.nu = nu;
  t.coeffs.resize(instance.gamma + 1);
  for (int j = 0; j <= instance.gamma; ++j) {
    try {
      t.coeffs[j] = radial_derivative(instance, 0.0, omega, nu, j, options).value / factorial(j);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precision_failure) throw;
      throw Error(ErrorKind::precision_failure,
                  "Taylor coefficient a_" + std::to_string(j) + ": " + e.what());
    }
  }
  constexpr int kSamples = 64;
  const double top = 0.5 * instance.cutoff.delta;
  const int order = instance.gamma + 1;
  double sup = 0.0;
  for (int i = 1; i <= kSamples; ++i) {
    const double rho = top * i / kSamples;
    sup = std::max(sup, std::abs(radial_derivative(instance, rho, omega, nu, order, options).value));
  }
  t.remainder_const = 1.5 * sup / factorial(order);
  return t;
}

double pi_value(const TaylorData& taylor, double rho) {
  double sum = 0.0;
  for (int j = taylor.gamma; j >= 2; --j) sum = sum * rho + j * std::abs(taylor.coeffs[j]);
  return sum * rho;
}

void gauss_gegenbauer(int n, double alpha, std::vector<double>& nodes,
                      std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double a = 2.0 * k + 2.0 * alpha;
    const double beta = k * (k + 2.0 * alpha) / ((a + 1.0) * (a - 1.0));
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const double mass = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) /
                      std::tgamma(alpha + 1.5);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    weights[i] = mass * v * v;
  }
}

std::vector<SphereNode> sphere_grid(int dim, int resolution) {
  if (dim < 1) throw Error(ErrorKind::invalid_argument, "sphere dimension must be >= 1");
  if (resolution < 1) throw Error(ErrorKind::invalid_argument, "resolution must be >= 1");
  std::vector<SphereNode> out;
  if (dim == 1) {
    out.push_back({Direction({-1.0}), 1.0});
    out.push_back({Direction({1.0}), 1.0});
    return out;
  }
  if (dim == 2) {
    const double w = 2.0 * std::numbers::pi / resolution;
    for (int k = 0; k < resolution; ++k) {
      const double angle = w * k;
      out.push_back({Direction({std::cos(angle), std::sin(angle)}), w});
    }
    return out;
  }
  // omega = (t, sqrt(1 - t^2) omega'), d omega = (1 - t^2)^{(N-3)/2} dt d omega'.
  const auto lower = sphere_grid(dim - 1, resolution + 1);
  std::vector<double> t, wt;
  gauss_gegenbauer((resolution + 2) / 2, 0.5 * (dim - 3), t, wt);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
    for (const auto& node : lower) {
      std::vector<double> v{t[i]};
      for (double c : node.omega.unit()) v.push_back(s * c);
      out.push_back({Direction(std::move(v)), wt[i] * node.weight});
    }
  }
  return out;
}

}  // namespace corput
