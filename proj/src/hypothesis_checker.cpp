#include "corput/hypothesis_checker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "corput/error.hpp"
#include "corput/quadrature.hpp"

namespace corput {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

Witness witness_at(double rho, const Direction& omega, const ParameterPoint& nu, double value) {
  return Witness{rho, omega.vec(), nu.coords, {}, value};
}

Witness witness_from_taylor(const TaylorData& t, double value) {
  return Witness{0.0, t.omega.vec(), t.nu.coords, {}, value};
}

DerivativeOptions with_order(DerivativeOptions options, int order) {
  options.max_order = std::max(options.max_order, order);
  return options;
}

void require_positive_rhos(const CheckGrid& grid) {
  if (grid.rhos.empty()) throw Error(ErrorKind::invalid_argument, "empty rho grid");
  for (double r : grid.rhos)
    if (!(r > 0.0))
      throw Error(ErrorKind::invalid_argument, "rho grid must exclude 0 (ratio undefined)");
}

// Calls fn(nu, omega, rho) over the grid in nu-major, omega, rho order.
template <class Fn>
void for_each_sample(const CheckGrid& grid, Fn&& fn) {
  for (const auto& nu : grid.nus)
    for (const auto& node : grid.directions)
      for (double rho : grid.rhos) fn(nu, node.omega, rho);
}

InequalityCertificate make_certificate(std::string name, const CheckGrid& grid) {
  InequalityCertificate c;
  c.name = std::move(name);
  c.grid_spec = grid.description;
  return c;
}

void set_status(InequalityCertificate& c, bool ok) {
  c.passed = ok;
  c.status = ok ? CertificateStatus::passed : CertificateStatus::failed;
}

const TaylorData& taylor_for(const std::vector<TaylorData>& taylors, const CheckGrid& grid,
                             std::size_t nu_index, std::size_t dir_index) {
  const std::size_t k = nu_index * grid.directions.size() + dir_index;
  if (taylors.size() != grid.nus.size() * grid.directions.size())
    throw Error(ErrorKind::invalid_argument, "Taylor table does not match the grid");
  return taylors[k];
}

// Mixed central difference of total order |alpha| with a common step h.
Complex mixed_difference(const std::function<Complex(std::span<const double>)>& f,
                         const Point& x, const std::vector<int>& alpha, double h) {
  const std::size_t n = alpha.size();
  std::vector<int> k(n, 0);
  int order = 0;
  for (int a : alpha) order += a;
  Complex sum{};
  Point y(n);
  while (true) {
    double coeff = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      coeff *= ((k[i] % 2) ? -1.0 : 1.0) * binomial(alpha[i], k[i]);
      y[i] = x[i] + (0.5 * alpha[i] - k[i]) * h;
    }
    sum += coeff * f(y);
    std::size_t i = 0;
    while (i < n && ++k[i] > alpha[i]) k[i++] = 0;
    if (i == n) break;
  }
  return sum / std::pow(h, order);
}

void multi_indices(int dim, int max_order, std::vector<std::vector<int>>& out) {
  std::vector<int> alpha(dim, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == dim) {
      out.push_back(alpha);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      alpha[i] = v;
      rec(i + 1, left - v);
    }
    alpha[i] = 0;
  };
  rec(0, max_order);
}

}  // namespace

const ConditionEntry& ConditionReport::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw Error(ErrorKind::invalid_argument, "no condition named " + name);
}

const InequalityCertificate* ConditionReport::certificate(const std::string& name) const {
  for (const auto& c : certificates)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1)
    throw Error(ErrorKind::invalid_argument, "log_spaced needs 0 < lo <= hi and count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = hi;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

CheckGrid default_grid(const ProblemInstance& instance, const GridOptions& options) {
  CheckGrid g;
  const double delta = instance.cutoff.delta;
  g.rhos = log_spaced(options.rho_min_fraction * delta, 0.5 * delta, options.rho_count);
  g.directions = sphere_grid(instance.dim, options.sphere_resolution);
  g.nus = instance.parameters_or_default();

  int per_axis = options.lattice_per_axis;
  if (per_axis <= 0) per_axis = instance.dim == 1 ? 201 : instance.dim == 2 ? 41 : instance.dim == 3 ? 15 : 7;
  const std::size_t total = static_cast<std::size_t>(std::pow(per_axis, instance.dim));
  g.points.push_back(instance.center);
  Point x(instance.dim);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (int i = 0; i < instance.dim; ++i) {
      const int k = static_cast<int>(c % per_axis);
      c /= per_axis;
      x[i] = per_axis == 1 ? 0.0 : -0.5 * delta + delta * k / (per_axis - 1);
    }
    if (instance.cutoff.evaluate(x) > 0.0) g.points.push_back(x);
  }

  std::ostringstream os;
  os << "rho: " << options.rho_count << " log-spaced in [" << g.rhos.front() << ", "
     << g.rhos.back() << "]; omega: sphere_grid(N=" << instance.dim
     << ", resolution=" << options.sphere_resolution << ") with " << g.directions.size()
     << " directions; nu: " << g.nus.size() << " samples; x: " << g.points.size()
     << " lattice points in supp chi";
  g.description = os.str();
  return g;
}

ConditionEntry check_F1(const TaylorData& taylor, double tol) {
  ConditionEntry e;
  e.name = "F1";
  const double a0 = std::abs(taylor.coeffs.at(0));
  const double a1 = std::abs(taylor.coeffs.at(1));
  const double worst = std::max(a0, a1);
  e.passed = a0 <= tol && a1 <= tol;
  e.constant = worst;
  e.witness = witness_from_taylor(taylor, a1 >= a0 ? a1 : a0);
  e.note = a1 >= a0 ? "max(|a_0|,|a_1|) attained by a_1" : "max(|a_0|,|a_1|) attained by a_0";
  return e;
}

ConditionEntry check_F2(const std::vector<TaylorData>& taylors, double c_min) {
  if (taylors.empty()) throw Error(ErrorKind::invalid_argument, "F2 needs a nonempty (omega, nu) grid");
  ConditionEntry e;
  e.name = "F2";
  double best = kInf;
  for (const auto& t : taylors) {
    double s = 0.0;
    for (int j = 2; j <= t.gamma; ++j) s += std::abs(t.coeffs[j]);
    if (s < best) {
      best = s;
      e.witness = witness_from_taylor(t, s);
    }
  }
  e.constant = best;
  e.passed = best >= c_min;
  return e;
}

ConditionEntry check_F3(const ProblemInstance& instance, const Direction& omega,
                        const ParameterPoint& nu, const std::vector<double>& rhos,
                        const DerivativeOptions& options) {
  for (std::size_t i = 1; i < rhos.size(); ++i)
    if (!(rhos[i] > rhos[i - 1]))
      throw Error(ErrorKind::invalid_argument, "F3 grid must be strictly increasing");
  ConditionEntry e;
  e.name = "F3";
  e.passed = true;
  double worst_drop = -kInf;
  DerivativeEstimate prev{};
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const DerivativeEstimate d = radial_derivative(instance, rhos[i], omega, nu, 1, options);
    if (i > 0) {
      const double drop = std::abs(prev.value) - std::abs(d.value);
      const double slack = std::max(1e-10, prev.error + d.error);
      if (drop > worst_drop) {
        worst_drop = drop;
        e.witness = witness_at(rhos[i], omega, nu, std::abs(d.value));
      }
      if (drop > slack) e.passed = false;
    }
    prev = d;
  }
  e.constant = rhos.size() > 1 ? worst_drop : 0.0;
  e.note = "constant = largest decrease of |dF/drho| between consecutive samples";
  return e;
}

ConditionEntry check_F4(const ProblemInstance& instance, const CheckGrid& grid, int max_order,
                        const DerivativeOptions& options) {
  if (max_order < instance.gamma + 1)
    throw Error(ErrorKind::invalid_argument, "F4 needs max_order >= gamma + 1");
  ConditionEntry e;
  e.name = "F4";
  e.per_order.assign(max_order + 1, 0.0);
  const auto opts = with_order(options, max_order);
  double overall = -1.0;
  for_each_sample(grid, [&](const ParameterPoint& nu, const Direction& omega, double rho) {
    for (int k = 0; k <= max_order; ++k) {
      const double v = std::abs(radial_derivative(instance, rho, omega, nu, k, opts).value);
      e.per_order[k] = std::max(e.per_order[k], v);
      if (v > overall) {
        overall = v;
        e.witness = witness_at(rho, omega, nu, v);
      }
    }
  });
  e.passed = std::all_of(e.per_order.begin(), e.per_order.end(),
                         [](double v) { return std::isfinite(v); });
  e.constant = overall;
  e.note = "per_order[k] = sampled sup |d^k F/drho^k|";
  return e;
}

ConditionEntry check_amplitude_bounds(const ProblemInstance& instance, const CheckGrid& grid,
                                      double fd_tolerance) {
  ConditionEntry e;
  e.name = "A4";
  const int order = instance.dim / instance.gamma + 1;
  std::vector<std::vector<int>> alphas;
  multi_indices(instance.dim, order, alphas);
  e.per_order.assign(order + 1, 0.0);
  double overall = -1.0;
  const double scale = std::max(instance.cutoff.delta / 4.0, 1.0);
  for (const auto& nu : grid.nus) {
    auto a = [&](std::span<const double> y) { return instance.amplitude.evaluate(y, nu); };
    for (const auto& x : grid.points) {
      for (const auto& alpha : alphas) {
        int len = 0;
        for (int v : alpha) len += v;
        Complex value;
        if (len == 0) {
          value = a(x);
        } else {
          const double h = 8.0 * std::pow(kEps, 1.0 / (len + 4)) * scale;
          Extrapolated r = richardson(
              [&](double step) { return mixed_difference(a, x, alpha, step); }, h);
          if (r.error > fd_tolerance * std::max(1.0, std::abs(r.value)))
            throw Error(ErrorKind::precision_failure,
                        "amplitude derivative of order " + std::to_string(len) +
                            " has error estimate " + std::to_string(r.error));
          value = r.value;
        }
        const double v = std::abs(value);
        e.per_order[len] = std::max(e.per_order[len], v);
        if (v > overall) {
          overall = v;
          e.witness = Witness{0.0, {}, nu.coords, x, v};
        }
      }
    }
  }
  e.passed = std::all_of(e.per_order.begin(), e.per_order.end(),
                         [](double v) { return std::isfinite(v); });
  e.constant = overall;
  e.note = "per_order[j] = max over |alpha| = j of sampled sup |d^alpha a|, orders <= " +
           std::to_string(order);
  return e;
}

ConditionEntry check_A1(const ProblemInstance& instance, const CheckGrid& grid) {
  ConditionEntry e;
  e.name = "A1";
  const double delta = instance.cutoff.delta;
  e.passed = delta > 0.0;
  std::string problems;
  const double at_center = instance.cutoff.evaluate(instance.center);
  if (!(at_center > 0.0)) {
    e.passed = false;
    problems += "chi(z) = 0; ";
  }
  double worst_outside = 0.0;
  const auto shells = {0.5, 0.5 + 1e-9, 0.55, 0.75, 1.0, 2.0};
  const auto dirs = sphere_grid(instance.dim, 32);
  for (double s : shells) {
    for (const auto& node : dirs) {
      Point x(instance.dim);
      for (int i = 0; i < instance.dim; ++i) x[i] = s * delta * node.omega.unit()[i];
      const double v = std::abs(instance.cutoff.evaluate(x));
      if (v > worst_outside) {
        worst_outside = v;
        e.witness = Witness{0.0, {}, {}, x, v};
      }
    }
  }
  if (worst_outside > 0.0) {
    e.passed = false;
    problems += "chi nonzero outside B_{delta/2}; ";
  }
  for (const auto& x : grid.points) {
    const double v = instance.cutoff.evaluate(x);
    if (!(v >= 0.0 && v <= 1.0)) {
      e.passed = false;
      e.witness = Witness{0.0, {}, {}, x, v};
      problems += "chi outside [0,1]; ";
      break;
    }
  }
  e.constant = 0.5 * delta;
  e.note = problems.empty() ? "support radius delta/2 checked structurally" : problems;
  return e;
}

ConditionEntry check_A2(const ProblemInstance& instance, const CheckGrid& grid) {
  ConditionEntry e;
  e.name = "A2";
  double worst = kInf;
  for (const auto& nu : grid.nus)
    for (const auto& x : grid.points) {
      const double im = eval_phase(instance, x, nu).imag();
      if (im < worst) {
        worst = im;
        e.witness = Witness{0.0, {}, nu.coords, x, im};
      }
    }
  e.constant = worst;
  e.passed = worst >= -1e-12;
  e.note = "constant = min Im Phi over sampled (x, nu)";
  return e;
}

std::vector<TaylorData> taylor_table(const ProblemInstance& instance, const CheckGrid& grid,
                                     const DerivativeOptions& options) {
  std::vector<TaylorData> out;
  out.reserve(grid.nus.size() * grid.directions.size());
  for (const auto& nu : grid.nus)
    for (const auto& node : grid.directions)
      out.push_back(taylor_coefficients(instance, node.omega, nu, options));
  return out;
}

InequalityCertificate verify_derivative_lower_bound(const ProblemInstance& instance,
                                                    const CheckGrid& grid,
                                                    const DerivativeOptions& options) {
  require_positive_rhos(grid);
  auto c = make_certificate("derivative_lower_bound", grid);
  double best = kInf;
  for_each_sample(grid, [&](const ParameterPoint& nu, const Direction& omega, double rho) {
    const double d = std::abs(radial_derivative(instance, rho, omega, nu, 1, options).value);
    const double ratio = d / std::pow(rho, instance.gamma - 1);
    if (ratio < best) {
      best = ratio;
      c.worst_point = witness_at(rho, omega, nu, ratio);
    }
  });
  c.best_constant = best;
  set_status(c, best > 1e-10);
  c.note = "min |dF/drho| / rho^(gamma-1)";
  return c;
}

InequalityCertificate verify_derivative_upper_bound(const ProblemInstance& instance,
                                                    const CheckGrid& grid, int m,
                                                    const DerivativeOptions& options) {
  if (m < 1) throw Error(ErrorKind::invalid_argument, "upper bound order must be >= 1");
  require_positive_rhos(grid);
  auto c = make_certificate("derivative_upper_bound_m" + std::to_string(m), grid);
  const auto opts = with_order(options, m);
  double best = 0.0;
  for_each_sample(grid, [&](const ParameterPoint& nu, const Direction& omega, double rho) {
    const auto d1 = radial_derivative(instance, rho, omega, nu, 1, opts);
    if (std::abs(d1.value) <= std::max(d1.error, 1e-300))
      throw Error(ErrorKind::singularity, "dF/drho vanishes at rho=" + std::to_string(rho) +
                                              " (F1/F3 violated along this direction)");
    const double dm = std::abs(radial_derivative(instance, rho, omega, nu, m, opts).value);
    const double ratio = dm * std::pow(rho, m - 1) / std::abs(d1.value);
    if (ratio >= best) {
      best = ratio;
      c.worst_point = witness_at(rho, omega, nu, ratio);
    }
  });
  c.best_constant = best;
  set_status(c, std::isfinite(best));
  c.note = "max |d^m F| rho^(m-1) / |dF|, m = " + std::to_string(m);
  return c;
}

InequalityCertificate verify_pi_lower_bound(const ProblemInstance& instance,
                                            const std::vector<TaylorData>& taylors,
                                            const CheckGrid& grid,
                                            const DerivativeOptions& options) {
  require_positive_rhos(grid);
  auto c = make_certificate("pi_lower_bound", grid);
  double best = kInf;
  for (std::size_t iv = 0; iv < grid.nus.size(); ++iv)
    for (std::size_t id = 0; id < grid.directions.size(); ++id) {
      const auto& t = taylor_for(taylors, grid, iv, id);
      const auto& omega = grid.directions[id].omega;
      for (double rho : grid.rhos) {
        const double pi = pi_value(t, rho);
        if (!(pi > 0.0))
          throw Error(ErrorKind::invalid_argument,
                      "pi(rho, mu) = 0 at rho=" + std::to_string(rho) + " (all a_j vanish)");
        const double d = std::abs(radial_derivative(instance, rho, omega, grid.nus[iv], 1, options).value);
        const double ratio = d / pi;
        if (ratio < best) {
          best = ratio;
          c.worst_point = witness_at(rho, omega, grid.nus[iv], ratio);
        }
      }
    }
  c.best_constant = best;
  set_status(c, best > 0.0);
  c.note = "min |dF/drho| / pi(rho, mu)";
  return c;
}

InequalityCertificate check_remainder_bound(const ProblemInstance& instance,
                                            const std::vector<TaylorData>& taylors,
                                            const CheckGrid& grid, int m,
                                            const DerivativeOptions& options) {
  const int gamma = instance.gamma;
  if (m < 1 || m > gamma) throw Error(ErrorKind::invalid_argument, "remainder needs 1 <= m <= gamma");
  require_positive_rhos(grid);
  auto c = make_certificate("remainder_bound_m" + std::to_string(m), grid);
  double best = 0.0;
  for (std::size_t iv = 0; iv < grid.nus.size(); ++iv)
    for (std::size_t id = 0; id < grid.directions.size(); ++id) {
      const auto& t = taylor_for(taylors, grid, iv, id);
      const auto& omega = grid.directions[id].omega;
      for (double rho : grid.rhos) {
        Complex poly{};
        for (int k = gamma - m; k >= 0; --k)
          poly = poly * rho + factorial(k + m) / factorial(k) * t.coeffs[k + m];
        const Complex dm = radial_derivative(instance, rho, omega, grid.nus[iv], m, options).value;
        const double ratio = std::abs(dm - poly) / std::pow(rho, gamma - m + 1);
        if (ratio >= best) {
          best = ratio;
          c.worst_point = witness_at(rho, omega, grid.nus[iv], ratio);
        }
      }
    }
  c.best_constant = best;
  set_status(c, std::isfinite(best));
  c.note = "max |R_{m,gamma-m}| / rho^(gamma-m+1), m = " + std::to_string(m);
  return c;
}

std::vector<InequalityCertificate> check_smooth_extension(const ProblemInstance& instance,
                                                          const CheckGrid& grid, int max_order,
                                                          const DerivativeOptions& options) {
  if (max_order <= instance.gamma)
    throw Error(ErrorKind::invalid_argument, "smooth extension needs M > gamma");
  require_positive_rhos(grid);
  const auto opts = with_order(options, max_order);
  std::vector<InequalityCertificate> out;
  for (int m = instance.gamma + 1; m <= max_order; ++m) {
    auto c = make_certificate("smooth_extension_m" + std::to_string(m), grid);
    c.note = "max |d^m F| rho^(m-2) / |dF|, m = " + std::to_string(m);
    try {
      double best = 0.0;
      for_each_sample(grid, [&](const ParameterPoint& nu, const Direction& omega, double rho) {
        const auto d1 = radial_derivative(instance, rho, omega, nu, 1, opts);
        if (std::abs(d1.value) <= std::max(d1.error, 1e-300))
          throw Error(ErrorKind::singularity, "dF/drho vanishes at rho=" + std::to_string(rho));
        const double dm = std::abs(radial_derivative(instance, rho, omega, nu, m, opts).value);
        const double ratio = dm * std::pow(rho, m - 2) / std::abs(d1.value);
        if (ratio >= best) {
          best = ratio;
          c.worst_point = witness_at(rho, omega, nu, ratio);
        }
      });
      c.best_constant = best;
      set_status(c, std::isfinite(best));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precision_failure) throw;
      c.passed = false;
      c.status = CertificateStatus::inconclusive;
      c.best_constant = kInf;
      c.note += "; inconclusive: " + std::string(e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<double> sufficient_delta(const ProblemInstance& instance, const CheckGrid& grid,
                                       const std::vector<TaylorData>& taylors,
                                       const DerivativeOptions& options) {
  const double delta = instance.cutoff.delta;
  const int count = static_cast<int>(grid.rhos.size());
  for (double d : {delta, delta / 2.0, delta / 4.0}) {
    CheckGrid shrunk = grid;
    shrunk.rhos = log_spaced(1e-4 * d, 0.5 * d, std::max(count, 2));
    try {
      if (verify_pi_lower_bound(instance, taylors, shrunk, options).best_constant > 0.1) return d;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

ConditionReport analyze(const ProblemInstance& instance, const CheckOptions& options) {
  ConditionReport report;
  report.instance = instance.name;
  const CheckGrid grid = default_grid(instance, options.grid);
  report.grid_spec = grid.description;
  const auto& dopts = options.derivatives;

  auto failed_entry = [](std::string name, const Error& e) {
    ConditionEntry c;
    c.name = std::move(name);
    c.passed = false;
    c.note = e.what();
    return c;
  };

  std::vector<TaylorData> taylors;
  std::optional<Error> taylor_error;
  try {
    taylors = taylor_table(instance, grid, dopts);
  } catch (const Error& e) {
    taylor_error = e;
  }

  // F1 over every mu; keep the worst.
  if (taylor_error) {
    report.conditions.push_back(failed_entry("F1", *taylor_error));
    report.conditions.push_back(failed_entry("F2", *taylor_error));
  } else {
    ConditionEntry f1 = check_F1(taylors.front(), options.f1_tol);
    for (const auto& t : taylors) {
      auto e = check_F1(t, options.f1_tol);
      if ((!e.passed && f1.passed) || (e.passed == f1.passed && *e.constant > *f1.constant))
        f1 = std::move(e);
    }
    report.conditions.push_back(f1);
    report.conditions.push_back(check_F2(taylors, options.c_min));
  }

  try {
    ConditionEntry f3;
    f3.name = "F3";
    f3.passed = true;
    double worst = -kInf;
    for (const auto& nu : grid.nus)
      for (const auto& node : grid.directions) {
        auto e = check_F3(instance, node.omega, nu, grid.rhos, dopts);
        f3.passed = f3.passed && e.passed;
        if (*e.constant > worst) {
          worst = *e.constant;
          f3.witness = e.witness;
        }
        f3.note = e.note;
      }
    f3.constant = worst;
    report.conditions.push_back(f3);
  } catch (const Error& e) {
    report.conditions.push_back(failed_entry("F3", e));
  }

  try {
    report.conditions.push_back(check_F4(instance, grid, instance.gamma + 1, dopts));
  } catch (const Error& e) {
    report.conditions.push_back(failed_entry("F4", e));
  }
  report.conditions.push_back(check_A1(instance, grid));
  try {
    report.conditions.push_back(check_A2(instance, grid));
  } catch (const Error& e) {
    report.conditions.push_back(failed_entry("A2", e));
  }
  try {
    report.conditions.push_back(check_amplitude_bounds(instance, grid, dopts.tolerance));
  } catch (const Error& e) {
    report.conditions.push_back(failed_entry("A4", e));
  }

  auto guarded = [&](const std::string& name, const std::function<InequalityCertificate()>& fn) {
    try {
      report.certificates.push_back(fn());
    } catch (const Error& e) {
      InequalityCertificate c = make_certificate(name, grid);
      c.best_constant = std::numeric_limits<double>::quiet_NaN();
      c.note = e.what();
      set_status(c, false);
      report.certificates.push_back(std::move(c));
    }
  };

  const int gamma = instance.gamma;
  guarded("derivative_lower_bound", [&] { return verify_derivative_lower_bound(instance, grid, dopts); });
  for (int m = 2; m <= gamma + 1; ++m)
    guarded("derivative_upper_bound_m" + std::to_string(m),
            [&] { return verify_derivative_upper_bound(instance, grid, m, dopts); });
  if (taylor_error) {
    InequalityCertificate c = make_certificate("pi_lower_bound", grid);
    c.note = taylor_error->what();
    report.certificates.push_back(c);
  } else {
    guarded("pi_lower_bound", [&] { return verify_pi_lower_bound(instance, taylors, grid, dopts); });
    for (int m = 1; m <= gamma; ++m)
      guarded("remainder_bound_m" + std::to_string(m),
              [&] { return check_remainder_bound(instance, taylors, grid, m, dopts); });
    report.sufficient_delta = sufficient_delta(instance, grid, taylors, dopts);
  }
  const int smooth_max = options.smooth_max_order > 0 ? options.smooth_max_order : gamma + 3;
  try {
    for (auto& c : check_smooth_extension(instance, grid, smooth_max, dopts))
      report.certificates.push_back(std::move(c));
  } catch (const Error& e) {
    InequalityCertificate c = make_certificate("smooth_extension", grid);
    c.note = e.what();
    report.certificates.push_back(c);
  }

  report.all_passed =
      std::all_of(report.conditions.begin(), report.conditions.end(),
                  [](const ConditionEntry& c) { return c.passed; }) &&
      std::none_of(report.certificates.begin(), report.certificates.end(),
                   [](const InequalityCertificate& c) { return c.status == CertificateStatus::failed; });
  return report;
}

}  // namespace corput
