#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace corput {

using Complex = std::complex<double>;
using Point = std::vector<double>;

/// A sampled value of the parameter nu. May be empty for parameter-free
/// problems.
struct ParameterPoint {
  std::vector<double> coords;
};

/// Phase evaluator: (x, nu) -> Phi(x, nu).
using PhaseEvaluator = std::function<Complex(std::span<const double>, const ParameterPoint&)>;

/// Closed-form radial derivative d^m/drho^m Phi(z + rho*omega, nu), with z the
/// owning instance's center. Any order m >= 0 must be supported.
using RadialDerivativeEvaluator =
    std::function<Complex(double rho, std::span<const double> omega, const ParameterPoint&, int m)>;

struct PhaseFunction {
  int dim = 1;
  PhaseEvaluator evaluate;
  RadialDerivativeEvaluator radial_derivative;  // empty when not known in closed form

  bool has_analytic_radial_derivatives() const { return static_cast<bool>(radial_derivative); }
};

struct Amplitude {
  PhaseEvaluator evaluate;
  std::optional<double> declared_derivative_bound;
};

/// Smooth cutoff supported in the closed ball of radius delta/2 around 0.
struct Cutoff {
  double delta = 1.0;
  std::function<double(std::span<const double>)> evaluate;
};

/// Full data of one oscillatory integral family
/// I(lambda, nu) = \int e^{i lambda Phi(x,nu)} a(x,nu) chi(x) dx.
struct ProblemInstance {
  std::string name;
  int dim = 1;
  int gamma = 2;
  Point center;
  PhaseFunction phase;
  Amplitude amplitude;
  Cutoff cutoff;
  std::vector<ParameterPoint> parameter_samples;

  /// Parameter samples, or a single empty point when the family has none.
  std::vector<ParameterPoint> parameters_or_default() const;

  /// Largest rho with chi(center + rho*omega) possibly nonzero.
  double radial_extent() const;
};

/// Validates the structural invariants (gamma >= 2, dimensions agree, center
/// strictly inside the cutoff support) and returns the instance unchanged.
ProblemInstance validated(ProblemInstance instance);

/// Phi(x, nu). Throws evaluation-failure when the value is not finite.
Complex eval_phase(const ProblemInstance& instance, std::span<const double> x,
                   const ParameterPoint& nu);

/// x -> exp(1 - 1/(1 - (2|x|/delta)^2)) inside B_{delta/2}(0), 0 outside.
Cutoff make_bump_cutoff(double delta, int dim);

/// Catalog parameters: every value is a list; scalars are one-element lists.
using ParamMap = std::map<std::string, std::vector<double>>;

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string description;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Builds a named instance. Unknown names raise catalog-miss listing the
/// valid names; unknown or out-of-range parameters raise invalid-argument.
ProblemInstance catalog(const std::string& name, const ParamMap& params = {});

}  // namespace corput
