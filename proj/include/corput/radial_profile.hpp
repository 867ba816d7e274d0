#pragma once

#include <span>
#include <vector>

#include "corput/phase_model.hpp"

namespace corput {

/// Unit vector omega on S^{N-1}; for N = 1 either -1 or +1.
class Direction {
 public:
  /// Normalizes `v`; throws invalid-argument for a zero or non-finite vector.
  explicit Direction(std::vector<double> v);

  std::span<const double> unit() const { return unit_; }
  const std::vector<double>& vec() const { return unit_; }
  int dim() const { return static_cast<int>(unit_.size()); }
  Direction opposite() const;

 private:
  std::vector<double> unit_;
};

struct DerivativeEstimate {
  Complex value{};
  double error = 0.0;
};

enum class DerivativeMode { automatic, finite_difference };

struct DerivativeOptions {
  DerivativeMode mode = DerivativeMode::automatic;
  /// Accepted error, relative to max(1, |value|).
  double tolerance = 1e-6;
  /// Highest order allowed; 0 means gamma + 1.
  int max_order = 0;
};

/// F(rho, omega, nu) = Phi(z + rho*omega, nu).
Complex radial_eval(const ProblemInstance& instance, double rho, const Direction& omega,
                    const ParameterPoint& nu);

/// d^m/drho^m F. Closed-form when the phase provides it, otherwise central
/// differences of the line restriction t -> Phi(z + t*omega) under Ridders
/// extrapolation. Negative t reaches the antipodal ray, so stencils at rho = 0
/// stay two-sided.
DerivativeEstimate radial_derivative(const ProblemInstance& instance, double rho,
                                     const Direction& omega, const ParameterPoint& nu, int m,
                                     const DerivativeOptions& options = {});

/// Radial Taylor data of order gamma at rho = 0 for one mu = (omega, nu).
struct TaylorData {
  std::vector<Complex> coeffs;  // a_0 .. a_gamma
  int gamma = 2;
  Direction omega{std::vector<double>{1.0}};
  ParameterPoint nu;
  /// 1.5 x sampled sup over (0, delta/2] of |d^{gamma+1}F| / (gamma+1)!.
  double remainder_const = 0.0;
};

TaylorData taylor_coefficients(const ProblemInstance& instance, const Direction& omega,
                               const ParameterPoint& nu, const DerivativeOptions& options = {});

/// pi(rho) = sum_{j=2}^{gamma} j |a_j| rho^{j-1}.
double pi_value(const TaylorData& taylor, double rho);

struct SphereNode {
  Direction omega;
  double weight = 0.0;
};

/// Quadrature on S^{N-1}. N = 1: the two points +-1 with unit weights. N = 2:
/// `resolution` equally spaced angles (exact for trigonometric degree below
/// `resolution`). N >= 3: Gauss-Gegenbauer in the first polar coordinate,
/// recursing down to a uniform azimuthal rule; exact for polynomial degree
/// <= resolution.
std::vector<SphereNode> sphere_grid(int dim, int resolution);

/// Gauss quadrature for the weight (1 - t^2)^alpha on [-1, 1] (Golub-Welsch).
void gauss_gegenbauer(int n, double alpha, std::vector<double>& nodes,
                      std::vector<double>& weights);

}  // namespace corput
