#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include "corput/error.hpp"

namespace corput {

using Complex = std::complex<double>;

/// Result of an adaptive panel integration on a single interval.
struct QuadratureResult {
  Complex value{};
  double error = 0.0;
  std::size_t panels = 0;
};

struct PanelOptions {
  /// Absolute target for the summed Kronrod/Gauss differences.
  double tol = 1e-10;
  std::size_t max_panels = std::size_t{1} << 16;
};

/// Estimated phase variation (radians) of the integrand over [a, b].
using PhaseVariation = std::function<double(double a, double b)>;

/// Thrown when the panel budget runs out; carries what was summed so far.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& message, QuadratureResult partial)
      : Error(ErrorKind::budget_exhausted, message), partial_(partial) {}

  const QuadratureResult& partial() const noexcept { return partial_; }

 private:
  QuadratureResult partial_;
};

/// One Gauss 7 / Kronrod 15 panel. Returns the Kronrod value; `error` receives
/// |K15 - G7|.
Complex gauss_kronrod_15(const std::function<Complex(double)>& f, double a, double b,
                         double& error);

/// Phase-adaptive panel quadrature of f over [a, b].
///
/// Panels are first bisected until `variation` (when given) reports at most
/// 2*pi over each panel; then the panel with the largest Kronrod/Gauss
/// difference is bisected until the summed difference drops below
/// `options.tol`. Panels are summed in left-endpoint order so the result is
/// reproducible for a given panel set.
QuadratureResult integrate_panels(const std::function<Complex(double)>& f, double a, double b,
                                  const PhaseVariation& variation, const PanelOptions& options);

/// Value and error estimate from a Richardson (Ridders) tableau.
struct Extrapolated {
  Complex value{};
  double error = 0.0;
  double step = 0.0;  // smallest h that entered the chosen entry
};

/// Ridders' polynomial extrapolation of approx(h) to h -> 0, assuming an error
/// expansion in even powers of h. Starts at `h_start` and shrinks by 1.4 per
/// level; returns the tableau entry with the smallest error estimate.
Extrapolated richardson(const std::function<Complex(double)>& approx, double h_start,
                        int levels = 10);

/// Central difference approximation of the m-th derivative of g at t with
/// step h (half-integer offsets for odd m). Second order in h, even expansion.
Complex central_difference(const std::function<Complex(double)>& g, double t, int m, double h);

}  // namespace corput
