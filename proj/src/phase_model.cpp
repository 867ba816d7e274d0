#include "corput/phase_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "corput/error.hpp"

namespace corput {
namespace {

double norm(std::span<const double> x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

double falling_factorial(int j, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= j - i;
  return r;
}

// m-th derivative of sum_j c[j] rho^j.
Complex polynomial_derivative(const std::vector<Complex>& c, double rho, int m) {
  Complex sum{};
  for (int j = static_cast<int>(c.size()) - 1; j >= m; --j)
    sum = sum * rho + c[j] * falling_factorial(j, m);
  return sum;
}

double power_sum(std::span<const double> v, int power) {
  double s = 0.0;
  for (double x : v) s += std::pow(x, power);
  return s;
}

// Reads catalog parameters and rejects keys nobody asked for.
class ParamReader {
 public:
  ParamReader(std::string entry, const ParamMap& params) : entry_(std::move(entry)), params_(params) {}

  double scalar(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    if (it->second.size() != 1)
      throw Error(ErrorKind::invalid_argument,
                  entry_ + ": parameter '" + key + "' expects a single value");
    if (!std::isfinite(it->second[0]))
      throw Error(ErrorKind::invalid_argument, entry_ + ": parameter '" + key + "' is not finite");
    return it->second[0];
  }

  int integer(const std::string& key, int fallback, int minimum) {
    const double v = scalar(key, fallback);
    if (v != std::floor(v) || v < minimum)
      throw Error(ErrorKind::invalid_argument, entry_ + ": parameter '" + key +
                                                   "' must be an integer >= " +
                                                   std::to_string(minimum));
    return static_cast<int>(v);
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    used_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    for (double v : it->second)
      if (!std::isfinite(v))
        throw Error(ErrorKind::invalid_argument,
                    entry_ + ": parameter '" + key + "' has a non-finite entry");
    return it->second;
  }

  void finish() const {
    for (const auto& [key, value] : params_)
      if (!used_.contains(key))
        throw Error(ErrorKind::invalid_argument,
                    entry_ + ": unknown parameter '" + key + "'");
  }

 private:
  std::string entry_;
  const ParamMap& params_;
  std::set<std::string> used_;
};

struct CommonParams {
  double delta;
  double amp;
};

CommonParams read_common(ParamReader& reader) {
  CommonParams c{reader.scalar("delta", 1.0), reader.scalar("amp", 1.0)};
  if (!(c.delta > 0.0)) throw Error(ErrorKind::invalid_argument, "delta must be positive");
  return c;
}

ProblemInstance base_instance(std::string name, int dim, int gamma, const CommonParams& common) {
  ProblemInstance inst;
  inst.name = std::move(name);
  inst.dim = dim;
  inst.gamma = gamma;
  inst.center.assign(dim, 0.0);
  inst.cutoff = make_bump_cutoff(common.delta, dim);
  const Complex amp = common.amp;
  inst.amplitude.evaluate = [amp](std::span<const double>, const ParameterPoint&) { return amp; };
  inst.amplitude.declared_derivative_bound = std::abs(common.amp);
  inst.phase.dim = dim;
  return inst;
}

void require_even(int gamma, const std::string& entry) {
  if (gamma % 2 != 0)
    throw Error(ErrorKind::invalid_argument,
                entry + ": gamma must be even so that the phase has Im >= 0 and |x|-symmetry");
}

std::string with_params(const std::string& name, const ParamMap& params) {
  if (params.empty()) return name;
  std::ostringstream os;
  os << name << '(';
  bool first = true;
  for (const auto& [key, values] : params) {
    os << (first ? "" : ",") << key << '=';
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ";" : "") << values[i];
    first = false;
  }
  os << ')';
  return os.str();
}

ProblemInstance make_monomial(const ParamMap& params) {
  ParamReader reader("monomial_1d", params);
  const int k = reader.integer("k", 2, 1);
  const auto common = read_common(reader);
  reader.finish();
  auto inst = base_instance(with_params("monomial_1d", params), 1, std::max(k, 2), common);
  inst.phase.evaluate = [k](std::span<const double> x, const ParameterPoint&) {
    return Complex(std::pow(x[0], k));
  };
  inst.phase.radial_derivative = [k](double rho, std::span<const double> w, const ParameterPoint&,
                                     int m) {
    std::vector<Complex> c(k + 1);
    c[k] = std::pow(w[0], k);
    return polynomial_derivative(c, rho, m);
  };
  return inst;
}

ProblemInstance make_radial_power(const std::string& entry, int dim, int gamma, Complex scale,
                                  const CommonParams& common, const ParamMap& params) {
  auto inst = base_instance(with_params(entry, params), dim, gamma, common);
  inst.phase.evaluate = [gamma, scale](std::span<const double> x, const ParameterPoint&) {
    return scale * power_sum(x, gamma);
  };
  inst.phase.radial_derivative = [gamma, scale](double rho, std::span<const double> w,
                                                const ParameterPoint&, int m) {
    std::vector<Complex> c(gamma + 1);
    c[gamma] = scale * power_sum(w, gamma);
    return polynomial_derivative(c, rho, m);
  };
  return inst;
}

ProblemInstance make_radial_power_entry(const ParamMap& params) {
  ParamReader reader("radial_power", params);
  const int dim = reader.integer("N", 2, 1);
  const int gamma = reader.integer("gamma", 4, 2);
  const auto common = read_common(reader);
  reader.finish();
  require_even(gamma, "radial_power");
  return make_radial_power("radial_power", dim, gamma, 1.0, common, params);
}

ProblemInstance make_fresnel(const ParamMap& params) {
  ParamReader reader("fresnel", params);
  const int dim = reader.integer("N", 1, 1);
  const auto common = read_common(reader);
  reader.finish();
  return make_radial_power("fresnel", dim, 2, 1.0, common, params);
}

ProblemInstance make_complex_damped(const ParamMap& params) {
  ParamReader reader("complex_damped", params);
  const int gamma = reader.integer("gamma", 2, 2);
  const int dim = reader.integer("N", 1, 1);
  const auto common = read_common(reader);
  reader.finish();
  require_even(gamma, "complex_damped");
  return make_radial_power("complex_damped", dim, gamma, Complex(1.0, 1.0), common, params);
}

ProblemInstance make_parametric_family(const ParamMap& params) {
  ParamReader reader("parametric_family", params);
  const int dim = reader.integer("N", 1, 1);
  const auto nus = reader.list("nu", {-0.1, 0.0, 0.1});
  const auto common = read_common(reader);
  reader.finish();
  if (nus.empty()) throw Error(ErrorKind::invalid_argument, "parametric_family: empty nu grid");
  auto inst = base_instance(with_params("parametric_family", params), dim, 2, common);
  for (double nu : nus) inst.parameter_samples.push_back(ParameterPoint{{nu}});
  inst.phase.evaluate = [](std::span<const double> x, const ParameterPoint& nu) {
    return Complex(power_sum(x, 2) + nu.coords.at(0) * power_sum(x, 3));
  };
  inst.phase.radial_derivative = [](double rho, std::span<const double> w, const ParameterPoint& nu,
                                    int m) {
    std::vector<Complex> c(4);
    c[2] = power_sum(w, 2);
    c[3] = nu.coords.at(0) * power_sum(w, 3);
    return polynomial_derivative(c, rho, m);
  };
  return inst;
}

ProblemInstance make_product_degenerate(const ParamMap& params) {
  ParamReader reader("product_degenerate", params);
  const auto common = read_common(reader);
  reader.finish();
  auto inst = base_instance(with_params("product_degenerate", params), 2, 4, common);
  inst.phase.evaluate = [](std::span<const double> x, const ParameterPoint&) {
    return Complex(x[0] * x[0] * x[1] * x[1]);
  };
  inst.phase.radial_derivative = [](double rho, std::span<const double> w, const ParameterPoint&,
                                    int m) {
    std::vector<Complex> c(5);
    c[4] = w[0] * w[0] * w[1] * w[1];
    return polynomial_derivative(c, rho, m);
  };
  return inst;
}

ProblemInstance make_polynomial(const ParamMap& params) {
  ParamReader reader("polynomial_1d", params);
  const auto coeffs = reader.list("coeffs", {0.0, 0.0, 1.0});
  const int gamma = reader.integer("gamma", 2, 2);
  const auto common = read_common(reader);
  reader.finish();
  if (coeffs.empty()) throw Error(ErrorKind::invalid_argument, "polynomial_1d: empty coeffs");
  auto inst = base_instance(with_params("polynomial_1d", params), 1, gamma, common);
  inst.phase.evaluate = [coeffs](std::span<const double> x, const ParameterPoint&) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x[0] + *it;
    return Complex(v);
  };
  inst.phase.radial_derivative = [coeffs](double rho, std::span<const double> w,
                                          const ParameterPoint&, int m) {
    std::vector<Complex> c(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      c[j] = coeffs[j] * std::pow(w[0], static_cast<int>(j));
    return polynomial_derivative(c, rho, m);
  };
  return inst;
}

ProblemInstance make_sine(const ParamMap& params) {
  ParamReader reader("sine_1d", params);
  const int gamma = reader.integer("gamma", 2, 2);
  const auto common = read_common(reader);
  reader.finish();
  auto inst = base_instance(with_params("sine_1d", params), 1, gamma, common);
  inst.phase.evaluate = [](std::span<const double> x, const ParameterPoint&) {
    return Complex(std::sin(x[0]));
  };
  inst.phase.radial_derivative = [](double rho, std::span<const double> w, const ParameterPoint&,
                                    int m) {
    return Complex(std::pow(w[0], m) * std::sin(w[0] * rho + 0.5 * m * std::numbers::pi));
  };
  return inst;
}

ProblemInstance make_exp_quadratic(const ParamMap& params) {
  ParamReader reader("exp_quadratic", params);
  const auto common = read_common(reader);
  reader.finish();
  auto inst = base_instance(with_params("exp_quadratic", params), 1, 2, common);
  // Deliberately no closed-form radial derivatives: exercises finite differences.
  inst.phase.evaluate = [](std::span<const double> x, const ParameterPoint&) {
    return Complex(std::expm1(x[0] * x[0]));
  };
  return inst;
}

}  // namespace

std::vector<ParameterPoint> ProblemInstance::parameters_or_default() const {
  if (parameter_samples.empty()) return {ParameterPoint{}};
  return parameter_samples;
}

double ProblemInstance::radial_extent() const { return norm(center) + 0.5 * cutoff.delta; }

ProblemInstance validated(ProblemInstance instance) {
  if (instance.dim < 1) throw Error(ErrorKind::invalid_argument, "dimension must be positive");
  if (instance.gamma < 2) throw Error(ErrorKind::invalid_argument, "gamma must be >= 2");
  if (static_cast<int>(instance.center.size()) != instance.dim)
    throw Error(ErrorKind::invalid_argument, "center dimension does not match N");
  if (instance.phase.dim != instance.dim)
    throw Error(ErrorKind::invalid_argument, "phase dimension does not match N");
  if (!instance.phase.evaluate || !instance.amplitude.evaluate || !instance.cutoff.evaluate)
    throw Error(ErrorKind::invalid_argument, "phase, amplitude and cutoff must all be set");
  if (!(instance.cutoff.delta > 0.0))
    throw Error(ErrorKind::invalid_argument, "cutoff delta must be positive");
  for (const auto& nu : instance.parameter_samples)
    for (double c : nu.coords)
      if (!std::isfinite(c)) throw Error(ErrorKind::invalid_argument, "non-finite parameter");
  if (!(instance.cutoff.evaluate(instance.center) > 0.0))
    throw Error(ErrorKind::invalid_argument,
                "center " + describe_point(instance.center) + " is outside the cutoff support");
  return instance;
}

Complex eval_phase(const ProblemInstance& instance, std::span<const double> x,
                   const ParameterPoint& nu) {
  for (double c : x)
    if (!std::isfinite(c))
      throw Error(ErrorKind::invalid_argument, "non-finite point " + describe_point(x));
  const Complex v = instance.phase.evaluate(x, nu);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorKind::evaluation_failure, "phase is not finite at x=" + describe_point(x) +
                                                   " nu=" + describe_point(nu.coords));
  return v;
}

Cutoff make_bump_cutoff(double delta, int dim) {
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_argument, "cutoff delta must be positive");
  if (dim < 1) throw Error(ErrorKind::invalid_argument, "cutoff dimension must be positive");
  const double scale = 4.0 / (delta * delta);
  return Cutoff{delta, [scale](std::span<const double> x) {
                  double u = 0.0;
                  for (double c : x) u += c * c;
                  u *= scale;
                  if (u >= 1.0) return 0.0;
                  return std::exp(1.0 - 1.0 / (1.0 - u));
                }};
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"monomial_1d", "Phi = x^k on R^1, gamma = max(k, 2)",
       {{"k", "2", "integer power >= 1"},
        {"delta", "1", "cutoff support diameter"},
        {"amp", "1", "constant amplitude"}}},
      {"radial_power", "Phi = sum_i x_i^gamma on R^N, gamma even",
       {{"N", "2", "dimension"},
        {"gamma", "4", "even order >= 2"},
        {"delta", "1", "cutoff support diameter"},
        {"amp", "1", "constant amplitude"}}},
      {"fresnel", "Phi = sum_i x_i^2 on R^N, gamma = 2",
       {{"N", "1", "dimension"},
        {"delta", "1", "cutoff support diameter"},
        {"amp", "1", "constant amplitude"}}},
      {"complex_damped", "Phi = (1+i) sum_i x_i^gamma, gamma even",
       {{"gamma", "2", "even order >= 2"},
        {"N", "1", "dimension"},
        {"delta", "1", "cutoff support diameter"},
        {"amp", "1", "constant amplitude"}}},
      {"parametric_family", "Phi = sum_i x_i^2 + nu sum_i x_i^3, gamma = 2",
       {{"N", "1", "dimension"},
        {"nu", "-0.1,0,0.1", "parameter samples"},
        {"delta", "1", "cutoff support diameter"},
        {"amp", "1", "constant amplitude"}}},
      {"product_degenerate", "Phi = x_1^2 x_2^2 on R^2, gamma = 4 (violates F2)",
       {{"delta", "1", "cutoff support diameter"}, {"amp", "1", "constant amplitude"}}},
      {"polynomial_1d", "Phi = sum_j c_j x^j on R^1",
       {{"coeffs", "0,0,1", "coefficients c_0, c_1, ..."},
        {"gamma", "2", "order >= 2"},
        {"delta", "1", "cutoff support diameter"},
        {"amp", "1", "constant amplitude"}}},
      {"sine_1d", "Phi = sin(x) on R^1 (violates F1)",
       {{"gamma", "2", "order >= 2"},
        {"delta", "1", "cutoff support diameter"},
        {"amp", "1", "constant amplitude"}}},
      {"exp_quadratic", "Phi = exp(x^2) - 1 on R^1, gamma = 2, derivatives by finite differences",
       {{"delta", "1", "cutoff support diameter"}, {"amp", "1", "constant amplitude"}}},
  };
  return entries;
}

ProblemInstance catalog(const std::string& name, const ParamMap& params) {
  ProblemInstance inst;
  if (name == "monomial_1d") inst = make_monomial(params);
  else if (name == "radial_power") inst = make_radial_power_entry(params);
  else if (name == "fresnel") inst = make_fresnel(params);
  else if (name == "complex_damped") inst = make_complex_damped(params);
  else if (name == "parametric_family") inst = make_parametric_family(params);
  else if (name == "product_degenerate") inst = make_product_degenerate(params);
  else if (name == "polynomial_1d") inst = make_polynomial(params);
  else if (name == "sine_1d") inst = make_sine(params);
  else if (name == "exp_quadratic") inst = make_exp_quadratic(params);
  else {
    std::string valid;
    for (const auto& e : catalog_entries()) valid += (valid.empty() ? "" : ", ") + e.name;
    throw Error(ErrorKind::catalog_miss, "unknown catalog entry '" + name + "'; valid: " + valid);
  }
  return validated(std::move(inst));
}

}  // namespace corput
