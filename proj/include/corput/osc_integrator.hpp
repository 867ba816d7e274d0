#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "corput/phase_model.hpp"
#include "corput/radial_profile.hpp"

namespace corput {

enum class Method { direct, radial, ibp };

std::string_view to_string(Method method);

struct IntegralResult {
  Complex value{};
  double error_estimate = 0.0;
  std::size_t panels_used = 1;
  Method method = Method::direct;
};

struct IntegrationOptions {
  /// Absolute error target for the whole integral.
  double tol = 1e-10;
  /// Panel budget for each one-dimensional panel integration.
  std::size_t max_panels = std::size_t{1} << 16;
  int sphere_resolution = 32;
};

/// e^{i lambda phi} computed as a modulus/argument pair; large lambda*Im(phi)
/// underflows to zero instead of overflowing.
Complex oscillatory_factor(double lambda, Complex phi);

/// Smooth cutoff, 1 on [0, 1/2], 0 on [1, inf), built from exp(-1/t).
double theta_cutoff(double s);

/// 1 - theta_cutoff(s), evaluated without cancellation.
double theta_complement(double s);

/// Tensor-product phase-adaptive panel quadrature over the cutoff ball.
IntegralResult integrate_direct(const ProblemInstance& instance, double lambda,
                                const ParameterPoint& nu, const IntegrationOptions& options = {});

/// \int_0^inf e^{i lambda F(rho,omega,nu)} a chi rho^{N-1} d rho for one omega.
IntegralResult integrate_inner_radial(const ProblemInstance& instance, double lambda,
                                      const Direction& omega, const ParameterPoint& nu,
                                      const IntegrationOptions& options = {});

/// Sphere quadrature of the inner radial integrals around the instance center.
IntegralResult integrate_radial(const ProblemInstance& instance, double lambda,
                                const ParameterPoint& nu, const IntegrationOptions& options = {});

/// Direct for N = 1 or lambda <= 100, radial otherwise.
IntegralResult integrate(const ProblemInstance& instance, double lambda, const ParameterPoint& nu,
                         const IntegrationOptions& options = {});

struct SplitResult {
  IntegralResult i1;
  IntegralResult i2;
  double lambda = 0.0;
  Direction omega{std::vector<double>{1.0}};
};

/// Splits the inner radial integral with the weights theta(lambda^{1/gamma} rho)
/// and 1 - theta(lambda^{1/gamma} rho). Requires lambda >= 1.
SplitResult split_I1_I2(const ProblemInstance& instance, double lambda, const Direction& omega,
                        const ParameterPoint& nu, const IntegrationOptions& options = {});

/// One monomial of (L*)^l with the prefactor (i/lambda)^l removed:
/// coefficient * prod_i d^{s_i}F / (dF)^{l+p} * d^r/drho^r, p = s.size().
struct IbpTerm {
  std::vector<int> s;
  int p = 0;
  int r = 0;
  long long coefficient = 0;
};

/// Expansion of (L*)^l for L = (i lambda dF)^{-1} d/drho, generated by
/// applying L* g = -d/drho (g / (i lambda dF)) l times. Terms are sorted and
/// merged; every term satisfies sum(s) + r - p = l.
std::vector<IbpTerm> ibp_terms(int l);

/// floor(N / gamma) + 1.
int default_ibp_order(int dim, int gamma);

/// I2 evaluated as \int e^{i lambda F} (L*)^l [a chi (1 - theta) rho^{N-1}] d rho.
/// Throws singularity when |dF| vanishes on the integration range.
IntegralResult ibp_evaluate_I2(const ProblemInstance& instance, double lambda,
                               const Direction& omega, const ParameterPoint& nu,
                               std::optional<int> l = std::nullopt,
                               const IntegrationOptions& options = {});

}  // namespace corput
