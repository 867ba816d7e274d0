#include "corput/osc_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "corput/error.hpp"
#include "corput/parallel.hpp"
#include "corput/quadrature.hpp"

namespace corput {
namespace {

constexpr double kDampingCutoff = 50.0;  // e^{-50} ~ 2e-22
constexpr double kSingularThreshold = 1e-12;

double smooth_step_kernel(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

PanelOptions panel_options(const IntegrationOptions& options, double tol) {
  return PanelOptions{tol, options.max_panels};
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::invalid_argument, "lambda must be finite and >= 0");
}

// Phase variation of lambda*Phi sampled at a, mid, b; zero where the factor
// e^{-lambda Im Phi} is negligible at all three samples.
double sampled_variation(double lambda, Complex pa, Complex pm, Complex pb) {
  if (lambda * std::min({pa.imag(), pm.imag(), pb.imag()}) > kDampingCutoff) return 0.0;
  const double spread = std::max({pa.real(), pm.real(), pb.real()}) -
                        std::min({pa.real(), pm.real(), pb.real()});
  return lambda * spread;
}

IntegralResult from_quadrature(const QuadratureResult& q, Method method) {
  return IntegralResult{q.value, q.error, std::max<std::size_t>(q.panels, 1), method};
}

class DirectIntegrator {
 public:
  DirectIntegrator(const ProblemInstance& instance, double lambda, const ParameterPoint& nu,
                   const IntegrationOptions& options)
      : inst_(instance), lambda_(lambda), nu_(nu), options_(options), x_(instance.dim, 0.0),
        radius_(0.5 * instance.cutoff.delta) {}

  IntegralResult run() {
    const double per_axis = options_.tol / instance_volume_scale();
    QuadratureResult q = axis(0, per_axis);
    return IntegralResult{q.value, q.error, std::max<std::size_t>(panels_, 1), Method::direct};
  }

 private:
  double instance_volume_scale() const { return std::pow(2.0, inst_.dim - 1); }

  Complex integrand(std::span<const double> x) const {
    const double chi = inst_.cutoff.evaluate(x);
    if (chi == 0.0) return {};
    const Complex a = inst_.amplitude.evaluate(x, nu_);
    if (a == Complex{}) return {};
    return oscillatory_factor(lambda_, eval_phase(inst_, x, nu_)) * a * chi;
  }

  // Largest transverse sampling of the phase along `axis` for the current
  // fixed coordinates x_[0..axis).
  double variation(int axis, double a, double b) const {
    const int free = inst_.dim - axis - 1;
    int combos = 1;
    for (int i = 0; i < free; ++i) combos *= 3;
    const double offsets[3] = {0.0, -0.5 * radius_, 0.5 * radius_};
    Point p = x_;
    double worst = 0.0;
    for (int c = 0; c < combos; ++c) {
      int code = c;
      for (int j = axis + 1; j < inst_.dim; ++j) {
        p[j] = offsets[code % 3];
        code /= 3;
      }
      p[axis] = a;
      const Complex pa = eval_phase(inst_, p, nu_);
      p[axis] = 0.5 * (a + b);
      const Complex pm = eval_phase(inst_, p, nu_);
      p[axis] = b;
      const Complex pb = eval_phase(inst_, p, nu_);
      worst = std::max(worst, sampled_variation(lambda_, pa, pm, pb));
    }
    return worst;
  }

  QuadratureResult axis(int k, double tol) {
    double r2 = 0.0;
    for (int j = 0; j < k; ++j) r2 += x_[j] * x_[j];
    const double half = std::sqrt(std::max(0.0, radius_ * radius_ - r2));
    if (half == 0.0) return {};
    const double lo = -half;
    const double hi = half;

    const bool last = (k == inst_.dim - 1);
    double inner_error = 0.0;
    auto f = [&](double t) -> Complex {
      x_[k] = t;
      if (last) return integrand(x_);
      QuadratureResult inner = axis(k + 1, tol);
      inner_error = std::max(inner_error, inner.error);
      return inner.value;
    };
    PhaseVariation var;
    if (lambda_ > 0.0) var = [&](double a, double b) { return variation(k, a, b); };
    QuadratureResult q = integrate_panels(f, lo, hi, var, panel_options(options_, tol));
    panels_ += q.panels;
    q.error += (hi - lo) * inner_error;
    return q;
  }

  const ProblemInstance& inst_;
  double lambda_;
  const ParameterPoint& nu_;
  IntegrationOptions options_;
  Point x_;
  double radius_;
  std::size_t panels_ = 0;
};

Point ray_point(const ProblemInstance& instance, double rho, const Direction& omega) {
  Point x = instance.center;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += rho * omega.unit()[i];
  return x;
}

// a(z + rho w) chi(z + rho w) rho^{N-1}
Complex radial_weight(const ProblemInstance& instance, double rho, const Direction& omega,
                      const ParameterPoint& nu) {
  const Point x = ray_point(instance, rho, omega);
  const double chi = instance.cutoff.evaluate(x);
  if (chi == 0.0) return {};
  return instance.amplitude.evaluate(x, nu) * chi * std::pow(rho, instance.dim - 1);
}

PhaseVariation radial_variation(const ProblemInstance& instance, double lambda,
                                const Direction& omega, const ParameterPoint& nu) {
  if (lambda == 0.0) return {};
  return [&instance, lambda, &omega, &nu](double a, double b) {
    return sampled_variation(lambda, radial_eval(instance, a, omega, nu),
                             radial_eval(instance, 0.5 * (a + b), omega, nu),
                             radial_eval(instance, b, omega, nu));
  };
}

QuadratureResult radial_panels(const ProblemInstance& instance, double lambda,
                               const Direction& omega, const ParameterPoint& nu, double lo,
                               double hi, const std::function<double(double)>& window,
                               const IntegrationOptions& options) {
  auto f = [&](double rho) -> Complex {
    const double w = window ? window(rho) : 1.0;
    if (w == 0.0) return {};
    const Complex g = radial_weight(instance, rho, omega, nu);
    if (g == Complex{}) return {};
    return oscillatory_factor(lambda, radial_eval(instance, rho, omega, nu)) * g * w;
  };
  return integrate_panels(f, lo, hi, radial_variation(instance, lambda, omega, nu),
                          panel_options(options, options.tol));
}

void check_split_arguments(const ProblemInstance& instance, double lambda, const Direction& omega) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::invalid_argument, "the I1/I2 split requires lambda >= 1");
  if (omega.dim() != instance.dim)
    throw Error(ErrorKind::invalid_argument, "direction dimension does not match N");
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::direct: return "direct";
    case Method::radial: return "radial";
    case Method::ibp: return "ibp";
  }
  return "unknown";
}

Complex oscillatory_factor(double lambda, Complex phi) {
  if (lambda == 0.0) return {1.0, 0.0};
  const double decay = lambda * phi.imag();
  if (decay > 745.0) return {};
  return std::polar(std::exp(-decay), lambda * phi.real());
}

double theta_cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double u = 2.0 * s - 1.0;
  const double up = smooth_step_kernel(1.0 - u);
  return up / (up + smooth_step_kernel(u));
}

double theta_complement(double s) {
  if (s <= 0.5) return 0.0;
  if (s >= 1.0) return 1.0;
  const double u = 2.0 * s - 1.0;
  const double down = smooth_step_kernel(u);
  return down / (down + smooth_step_kernel(1.0 - u));
}

IntegralResult integrate_direct(const ProblemInstance& instance, double lambda,
                                const ParameterPoint& nu, const IntegrationOptions& options) {
  check_lambda(lambda);
  DirectIntegrator integrator(instance, lambda, nu, options);
  return integrator.run();
}

IntegralResult integrate_inner_radial(const ProblemInstance& instance, double lambda,
                                      const Direction& omega, const ParameterPoint& nu,
                                      const IntegrationOptions& options) {
  check_lambda(lambda);
  if (omega.dim() != instance.dim)
    throw Error(ErrorKind::invalid_argument, "direction dimension does not match N");
  return from_quadrature(
      radial_panels(instance, lambda, omega, nu, 0.0, instance.radial_extent(), {}, options),
      Method::radial);
}

IntegralResult integrate_radial(const ProblemInstance& instance, double lambda,
                                const ParameterPoint& nu, const IntegrationOptions& options) {
  check_lambda(lambda);
  const auto nodes = sphere_grid(instance.dim, options.sphere_resolution);
  double total_weight = 0.0;
  for (const auto& n : nodes) total_weight += n.weight;
  IntegrationOptions inner = options;
  inner.tol = options.tol / total_weight;

  std::vector<IntegralResult> parts(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    parts[i] = integrate_inner_radial(instance, lambda, nodes[i].omega, nu, inner);
  });
  IntegralResult out{{}, 0.0, 0, Method::radial};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.value += nodes[i].weight * parts[i].value;
    out.error_estimate += nodes[i].weight * parts[i].error_estimate;
    out.panels_used += parts[i].panels_used;
  }
  return out;
}

IntegralResult integrate(const ProblemInstance& instance, double lambda, const ParameterPoint& nu,
                         const IntegrationOptions& options) {
  if (instance.dim == 1 || lambda <= 100.0) return integrate_direct(instance, lambda, nu, options);
  return integrate_radial(instance, lambda, nu, options);
}

SplitResult split_I1_I2(const ProblemInstance& instance, double lambda, const Direction& omega,
                        const ParameterPoint& nu, const IntegrationOptions& options) {
  check_split_arguments(instance, lambda, omega);
  const double scale = std::pow(lambda, 1.0 / instance.gamma);
  const double extent = instance.radial_extent();
  const double plateau_end = 0.5 / scale;
  const double support_end = 1.0 / scale;

  SplitResult out{{}, {}, lambda, omega};
  auto theta = [scale](double rho) { return theta_cutoff(scale * rho); };
  auto complement = [scale](double rho) { return theta_complement(scale * rho); };

  // I1 in two pieces so the plateau/transition boundary is a panel edge.
  const double mid = std::min(plateau_end, extent);
  const double top = std::min(support_end, extent);
  QuadratureResult a = radial_panels(instance, lambda, omega, nu, 0.0, mid, {}, options);
  QuadratureResult b = radial_panels(instance, lambda, omega, nu, mid, top, theta, options);
  out.i1 = IntegralResult{a.value + b.value, a.error + b.error, a.panels + b.panels, Method::radial};

  if (plateau_end >= extent) {
    out.i2 = IntegralResult{{}, 0.0, 1, Method::radial};
    return out;
  }
  QuadratureResult c = radial_panels(instance, lambda, omega, nu, plateau_end, top, complement, options);
  QuadratureResult d = radial_panels(instance, lambda, omega, nu, top, extent, {}, options);
  out.i2 = IntegralResult{c.value + d.value, c.error + d.error, c.panels + d.panels, Method::radial};
  return out;
}

std::vector<IbpTerm> ibp_terms(int l) {
  if (l < 1) throw Error(ErrorKind::invalid_argument, "expansion level must be >= 1");
  // key: (sorted s, r) -> coefficient
  using Key = std::pair<std::vector<int>, int>;
  std::map<Key, long long> level{{Key{{}, 0}, 1}};
  for (int k = 0; k < l; ++k) {
    std::map<Key, long long> next;
    for (const auto& [key, c] : level) {
      const auto& [s, r] = key;
      const long long p = static_cast<long long>(s.size());
      // d/drho hits g^{(r)}
      next[Key{s, r + 1}] += c;
      // d/drho hits one factor d^{s_i}F
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto t = s;
        ++t[i];
        std::sort(t.begin(), t.end());
        next[Key{t, r}] += c;
      }
      // d/drho hits (dF)^{-(k+1+p)}
      auto t = s;
      t.push_back(2);
      std::sort(t.begin(), t.end());
      next[Key{t, r}] -= c * (k + 1 + p);
    }
    level.clear();
    for (auto& [key, c] : next)
      if (c != 0) level.emplace(key, c);
  }
  std::vector<IbpTerm> out;
  for (const auto& [key, c] : level)
    out.push_back(IbpTerm{key.first, static_cast<int>(key.first.size()), key.second, c});
  return out;
}

int default_ibp_order(int dim, int gamma) { return dim / gamma + 1; }

IntegralResult ibp_evaluate_I2(const ProblemInstance& instance, double lambda,
                               const Direction& omega, const ParameterPoint& nu,
                               std::optional<int> l, const IntegrationOptions& options) {
  check_split_arguments(instance, lambda, omega);
  const int level = l.value_or(default_ibp_order(instance.dim, instance.gamma));
  const auto terms = ibp_terms(level);
  const double scale = std::pow(lambda, 1.0 / instance.gamma);
  const double extent = instance.radial_extent();
  const double lo = 0.5 / scale;
  if (lo >= extent) return IntegralResult{{}, 0.0, 1, Method::ibp};

  int max_s = 1;
  for (const auto& t : terms)
    for (int s : t.s) max_s = std::max(max_s, s);

  auto bracket = [&](double rho) -> Complex {
    if (rho <= lo) return {};
    const double w = theta_complement(scale * rho);
    if (w == 0.0) return {};
    return radial_weight(instance, rho, omega, nu) * w;
  };
  const double h_start = 0.02 * std::min(1.0 / scale, extent);

  DerivativeOptions dopts;
  dopts.max_order = max_s;

  // a zero of dF/drho between quadrature nodes would otherwise go unnoticed
  {
    constexpr int kScan = 512;
    Complex prev = radial_derivative(instance, lo, omega, nu, 1, dopts).value;
    for (int i = 1; i <= kScan; ++i) {
      const double rho = lo + (extent - lo) * i / kScan;
      const Complex cur = radial_derivative(instance, rho, omega, nu, 1, dopts).value;
      if (std::abs(cur) <= kSingularThreshold ||
          (prev.real() * cur.real() <= 0.0 && prev.imag() * cur.imag() <= 0.0))
        throw Error(ErrorKind::singularity,
                    "dF/drho vanishes in [" + std::to_string(rho - (extent - lo) / kScan) + ", " +
                        std::to_string(rho) + "] (hypotheses F1/F3 or the lower bound fail)");
      prev = cur;
    }
  }

  double fd_error = 0.0;
  auto integrand = [&](double rho) -> Complex {
    std::vector<Complex> dF(max_s + 1);
    for (int s = 1; s <= max_s; ++s)
      dF[s] = radial_derivative(instance, rho, omega, nu, s, dopts).value;
    if (std::abs(dF[1]) <= kSingularThreshold)
      throw Error(ErrorKind::singularity,
                  "|dF/drho| = " + std::to_string(std::abs(dF[1])) + " at rho=" +
                      std::to_string(rho) + " (hypotheses F1/F3 or the lower bound fail)");
    std::vector<Extrapolated> dg(level + 1);
    dg[0] = {bracket(rho), 0.0};
    for (int r = 1; r <= level; ++r)
      dg[r] = richardson([&](double h) { return central_difference(bracket, rho, r, h); },
                         h_start);
    Complex sum{};
    double err = 0.0;
    for (const auto& t : terms) {
      Complex factor = static_cast<double>(t.coefficient) / std::pow(dF[1], level + t.p);
      for (int s : t.s) factor *= dF[s];
      sum += factor * dg[t.r].value;
      err += std::abs(factor) * dg[t.r].error;
    }
    fd_error = std::max(fd_error, err);
    return oscillatory_factor(lambda, radial_eval(instance, rho, omega, nu)) * sum;
  };

  const Complex prefactor = std::pow(Complex(0.0, 1.0 / lambda), level);
  IntegrationOptions scaled = options;
  scaled.tol = options.tol / std::abs(prefactor);
  QuadratureResult q = integrate_panels(integrand, lo, extent,
                                        radial_variation(instance, lambda, omega, nu),
                                        panel_options(scaled, scaled.tol));
  return IntegralResult{prefactor * q.value,
                        std::abs(prefactor) * (q.error + (extent - lo) * fd_error),
                        std::max<std::size_t>(q.panels, 1), Method::ibp};
}

}  // namespace corput
