#include <cmath>
#include <map>
#include <numbers>

#include "corput/error.hpp"
#include "corput/osc_integrator.hpp"
#include "corput/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace corput;

namespace {

constexpr double kPi = std::numbers::pi;
const ParameterPoint kNoNu{};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

bool satisfies_constraint(const IbpTerm& t, int l) {
  int sum = 0;
  for (int s : t.s) sum += s;
  return sum + t.r - t.p == l && t.p == static_cast<int>(t.s.size());
}

}  // namespace

TEST_SUITE("osc_integrator") {

TEST_CASE("theta cutoff") {
  CHECK(theta_cutoff(0.0) == 1.0);
  CHECK(theta_cutoff(0.25) == 1.0);
  CHECK(theta_cutoff(0.5) == 1.0);
  CHECK(theta_cutoff(1.0) == 0.0);
  CHECK(theta_cutoff(2.0) == 0.0);
  const double v = theta_cutoff(0.75);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  double previous = 1.0;
  for (double s = 0.5; s <= 1.0; s += 0.01) {
    const double t = theta_cutoff(s);
    // mirrored transition: theta(3/2 - s)
    CHECK(t + theta_cutoff(1.5 - s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t + theta_complement(s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t <= previous);
    previous = t;
  }
}

TEST_CASE("oscillatory factor stays finite for strongly damped phases") {
  CHECK(oscillatory_factor(1e6, Complex(0.3, 0.3)) == Complex(0.0, 0.0));
  CHECK(oscillatory_factor(1e300, Complex(1.0, 1.0)) == Complex(0.0, 0.0));
  const Complex z = oscillatory_factor(2.0, Complex(0.5, 0.25));
  CHECK(std::abs(z - std::exp(Complex(0, 2.0) * Complex(0.5, 0.25))) <= 1e-15);
}

TEST_CASE("lambda = 0 reduces to the integral of the bump") {
  const double line = oracle::simpson([](double x) { return oracle::bump(x, 1.0); }, -0.5, 0.5, 200000);
  const auto r1 = integrate_direct(catalog("fresnel"), 0.0, kNoNu);
  CHECK(std::abs(r1.value.real() - line) <= 1e-9);
  CHECK(r1.value.imag() == 0.0);

  const double disc =
      2 * kPi * oracle::simpson([](double r) { return oracle::bump(r, 1.0) * r; }, 0.0, 0.5, 200000);
  auto f2 = catalog("fresnel", {{"N", {2}}});
  const auto d = integrate_direct(f2, 0.0, kNoNu);
  const auto r = integrate_radial(f2, 0.0, kNoNu);
  CHECK(std::abs(d.value.real() - disc) <= 1e-8);
  CHECK(std::abs(r.value.real() - disc) <= 1e-9);
}

TEST_CASE("fresnel N=1 at lambda = 100 against brute force and the stationary phase term") {
  const double lambda = 100.0;
  const Complex brute = oracle::simpson(
      [&](double x) { return std::exp(Complex(0, lambda * x * x)) * oracle::bump(x, 1.0); }, -0.5, 0.5,
      1000000);
  const auto r = integrate_direct(catalog("fresnel"), lambda, kNoNu);
  CHECK(std::abs(r.value - brute) <= 1e-8);
  CHECK(r.error_estimate <= 1e-8);
  const Complex leading = std::polar(std::sqrt(kPi / lambda), kPi / 4);
  CHECK(rel(r.value, leading) <= 0.05);
}

TEST_CASE("zero amplitude integrates to zero") {
  for (const char* name : {"fresnel", "monomial_1d", "radial_power"}) {
    auto inst = catalog(name, {{"amp", {0.0}}});
    CHECK(integrate_direct(inst, 37.0, kNoNu).value == Complex(0.0, 0.0));
    CHECK(integrate_radial(inst, 37.0, kNoNu).value == Complex(0.0, 0.0));
  }
}

TEST_CASE("radial form reproduces the direct 1D integral") {
  for (double lambda : {0.0, 3.0, 250.0}) {
    auto m = catalog("monomial_1d", {{"k", {3}}});
    const auto d = integrate_direct(m, lambda, kNoNu);
    const auto r = integrate_radial(m, lambda, kNoNu);
    CHECK(std::abs(d.value - r.value) <= d.error_estimate + r.error_estimate + 1e-13);
  }
}

TEST_CASE("direct and radial agree on fresnel N=2") {
  auto f2 = catalog("fresnel", {{"N", {2}}});
  for (double lambda : {0.0, 50.0}) {
    const auto d = integrate_direct(f2, lambda, kNoNu);
    const auto r = integrate_radial(f2, lambda, kNoNu);
    CHECK(std::abs(d.value - r.value) <= 2 * (d.error_estimate + r.error_estimate));
  }
}

TEST_CASE("method agreement over the catalog") {
  IntegrationOptions opts;
  opts.tol = 1e-9;
  for (const auto& entry : catalog_entries()) {
    auto inst = catalog(entry.name);
    CAPTURE(entry.name);
    const auto nu = inst.parameters_or_default().front();
    for (double lambda : {0.0, 1.0, 10.0, 100.0}) {
      CAPTURE(lambda);
      const auto d = integrate_direct(inst, lambda, nu, opts);
      const auto r = integrate_radial(inst, lambda, nu, opts);
      CHECK(std::abs(d.value - r.value) <= d.error_estimate + r.error_estimate);
    }
  }
}

TEST_CASE("budget exhaustion carries the partial result") {
  IntegrationOptions opts;
  opts.max_panels = 4;
  try {
    integrate_direct(catalog("fresnel"), 1e5, kNoNu, opts);
    FAIL("expected budget exhaustion");
  } catch (const BudgetExhausted& e) {
    CHECK(e.kind() == ErrorKind::budget_exhausted);
    CHECK(e.partial().panels >= 1);
  }
}

TEST_CASE("linearity in the amplitude") {
  auto base = catalog("monomial_1d", {{"k", {3}}});
  auto a1 = base, a2 = base, sum = base;
  a1.amplitude.evaluate = [](std::span<const double> x, const ParameterPoint&) { return Complex(1.0 + x[0]); };
  a2.amplitude.evaluate = [](std::span<const double> x, const ParameterPoint&) {
    return Complex(std::cos(3 * x[0]), x[0] * x[0]);
  };
  sum.amplitude.evaluate = [&](std::span<const double> x, const ParameterPoint& nu) {
    return a1.amplitude.evaluate(x, nu) + a2.amplitude.evaluate(x, nu);
  };
  auto scaled = a2;
  scaled.amplitude.evaluate = [&](std::span<const double> x, const ParameterPoint& nu) {
    return Complex(-2.0, 0.5) * a2.amplitude.evaluate(x, nu);
  };
  const double lambda = 80.0;
  const auto r1 = integrate_direct(a1, lambda, kNoNu);
  const auto r2 = integrate_direct(a2, lambda, kNoNu);
  const auto rs = integrate_direct(sum, lambda, kNoNu);
  const auto rc = integrate_direct(scaled, lambda, kNoNu);
  CHECK(std::abs(rs.value - (r1.value + r2.value)) <= r1.error_estimate + r2.error_estimate + rs.error_estimate);
  CHECK(std::abs(rc.value - Complex(-2.0, 0.5) * r2.value) <=
        rc.error_estimate + std::abs(Complex(-2.0, 0.5)) * r2.error_estimate);
}

TEST_CASE("split identity and trivial I2") {
  auto f = catalog("fresnel");
  const auto small = split_I1_I2(f, 1.0, Direction({1.0}), kNoNu);
  CHECK(small.i2.value == Complex(0.0, 0.0));
  CHECK(small.i2.panels_used >= 1);

  for (double lambda : {10.0, 100.0}) {
    for (const char* name : {"fresnel", "parametric_family"}) {
      auto inst = catalog(name);
      for (double sign : {-1.0, 1.0}) {
        Direction w({sign});
        const auto nu = inst.parameters_or_default().back();
        const auto s = split_I1_I2(inst, lambda, w, nu);
        const auto whole = integrate_inner_radial(inst, lambda, w, nu);
        CHECK(std::abs(s.i1.value + s.i2.value - whole.value) <=
              s.i1.error_estimate + s.i2.error_estimate + whole.error_estimate);
      }
    }
  }
  auto f2 = catalog("fresnel", {{"N", {2}}});
  Direction w({0.6, -0.8});
  const auto s = split_I1_I2(f2, 100.0, w, kNoNu);
  const auto whole = integrate_inner_radial(f2, 100.0, w, kNoNu);
  CHECK(std::abs(s.i1.value + s.i2.value - whole.value) <=
        s.i1.error_estimate + s.i2.error_estimate + whole.error_estimate);
  CHECK_THROWS_AS(split_I1_I2(f, 0.5, Direction({1.0}), kNoNu), Error);
}

TEST_CASE("I1 obeys the sup |a chi| volume bound") {
  // |I1| <= sup|a chi| * int_0^{lambda^{-1/gamma}} rho^{N-1} d rho = lambda^{-N/gamma} / N
  auto f2 = catalog("fresnel", {{"N", {2}}});
  for (double lambda : {1.0, 10.0, 100.0, 1e4})
    for (double angle : {0.0, 1.0, 2.5}) {
      const auto s = split_I1_I2(f2, lambda, Direction({std::cos(angle), std::sin(angle)}), kNoNu);
      CHECK(std::abs(s.i1.value) <= std::pow(lambda, -1.0) / 2.0);
    }
}

TEST_CASE("ibp terms for l = 1 and l = 2") {
  const auto t1 = ibp_terms(1);
  REQUIRE(t1.size() == 2);
  std::map<std::pair<std::vector<int>, int>, long long> one;
  for (const auto& t : t1) one[{t.s, t.r}] = t.coefficient;
  CHECK(one.at({{}, 1}) == 1);    // g' / F'
  CHECK(one.at({{2}, 0}) == -1);  // g F'' / F'^2

  std::map<std::pair<std::vector<int>, int>, long long> two;
  for (const auto& t : ibp_terms(2)) two[{t.s, t.r}] = t.coefficient;
  // d/drho (g'/F'^2 - g F''/F'^3), expanded by hand
  const std::map<std::pair<std::vector<int>, int>, long long> expected = {
      {{{}, 2}, 1}, {{{2}, 1}, -3}, {{{3}, 0}, -1}, {{{2, 2}, 0}, 3}};
  CHECK(two == expected);

  for (int l = 1; l <= 4; ++l)
    for (const auto& t : ibp_terms(l)) {
      CHECK(satisfies_constraint(t, l));
      for (int s : t.s) CHECK(s >= 2);
      CHECK(t.coefficient != 0);
    }
  CHECK_THROWS_AS(ibp_terms(0), Error);
  CHECK(default_ibp_order(1, 2) == 1);
  CHECK(default_ibp_order(2, 2) == 2);
  CHECK(default_ibp_order(3, 2) == 2);
  CHECK(default_ibp_order(2, 4) == 1);
}

TEST_CASE("term expansion reproduces integration by parts on a closed-form example") {
  // F = rho^2 on [1/2, 3/2], g = sin^4(pi (rho - 1/2)) vanishes with g' at both ends
  const double lambda = 40.0, a = 0.5, b = 1.5;
  auto g = [](double r, int k) {
    const double u = kPi * (r - 0.5);
    const double s = std::sin(u), c = std::cos(u);
    switch (k) {
      case 0: return std::pow(s, 4);
      case 1: return 4 * kPi * s * s * s * c;
      default: return 4 * kPi * kPi * (3 * s * s * c * c - s * s * s * s);
    }
  };
  auto dF = [](double r, int s) { return s == 1 ? 2 * r : (s == 2 ? 2.0 : 0.0); };
  const auto plain = integrate_panels(
      [&](double r) { return std::exp(Complex(0, lambda * r * r)) * g(r, 0); }, a, b, {}, {1e-13, 1 << 16});
  for (int l : {1, 2}) {
    const auto terms = ibp_terms(l);
    auto integrand = [&](double r) {
      Complex sum{};
      for (const auto& t : terms) {
        double f = double(t.coefficient) / std::pow(dF(r, 1), l + t.p);
        for (int s : t.s) f *= dF(r, s);
        sum += f * g(r, t.r);
      }
      return std::exp(Complex(0, lambda * r * r)) * sum;
    };
    const auto q = integrate_panels(integrand, a, b, {}, {1e-13, 1 << 16});
    const Complex value = std::pow(Complex(0, 1 / lambda), l) * q.value;
    CAPTURE(l);
    CHECK(std::abs(value - plain.value) <= 1e-11);
  }
}

TEST_CASE("ibp evaluation matches the split I2") {
  struct Case {
    const char* name;
    ParamMap params;
    double lambda;
  };
  for (const auto& c : {Case{"fresnel", {}, 100.0}, Case{"fresnel", {}, 1e4},
                        Case{"monomial_1d", {{"k", {4}}}, 1e4}, Case{"monomial_1d", {{"k", {4}}}, 1e2}}) {
    auto inst = catalog(c.name, c.params);
    for (double sign : {-1.0, 1.0}) {
      Direction w({sign});
      const auto s = split_I1_I2(inst, c.lambda, w, kNoNu);
      const auto ibp = ibp_evaluate_I2(inst, c.lambda, w, kNoNu);
      CAPTURE(c.name);
      CAPTURE(c.lambda);
      CHECK(ibp.method == Method::ibp);
      CHECK(rel(ibp.value, s.i2.value) <= 1e-3);
    }
  }
  // higher l than required is still valid
  auto f = catalog("fresnel");
  const auto s = split_I1_I2(f, 1000.0, Direction({1.0}), kNoNu);
  CHECK(rel(ibp_evaluate_I2(f, 1000.0, Direction({1.0}), kNoNu, 2).value, s.i2.value) <= 1e-3);
  // empty effective support
  CHECK(ibp_evaluate_I2(f, 1.0, Direction({1.0}), kNoNu).value == Complex(0.0, 0.0));
}

TEST_CASE("ibp refuses a vanishing phase derivative") {
  auto s = catalog("sine_1d", {{"delta", {4.0}}});
  try {
    ibp_evaluate_I2(s, 100.0, Direction({1.0}), kNoNu);
    FAIL("expected singularity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singularity);
  }
}

}  // TEST_SUITE
