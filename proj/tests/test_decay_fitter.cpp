#include <cmath>

#include "corput/decay_fitter.hpp"
#include "corput/error.hpp"
#include "doctest.h"

using namespace corput;

TEST_SUITE("decay_fitter") {

TEST_CASE("lambda grid arithmetic") {
  const auto g = lambda_grid(1.0, 100.0, 2);
  REQUIRE(g.size() == 5);
  const double expected[] = {1.0, std::pow(10.0, 0.5), 10.0, std::pow(10.0, 1.5), 100.0};
  for (int i = 0; i < 5; ++i) CHECK(g[i] == doctest::Approx(expected[i]).epsilon(1e-14));

  const auto z = lambda_grid(0.0, 1000.0, 1);
  REQUIRE(z.size() == 5);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 1.0);
  CHECK(z.back() == doctest::Approx(1000.0));
  for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i] > z[i - 1]);

  CHECK_THROWS_AS(lambda_grid(10.0, 10.0, 2), Error);
  CHECK_THROWS_AS(lambda_grid(1.0, 10.0, 0), Error);
  CHECK_THROWS_AS(lambda_grid(-1.0, 10.0, 2), Error);
}

TEST_CASE("synthetic power laws are recovered exactly") {
  std::vector<double> lam, mag, err;
  for (int i = 0; i <= 30; ++i) {
    lam.push_back(std::pow(10.0, i / 10.0));
    mag.push_back(5.0 / lam.back());
    err.push_back(0.0);
  }
  const auto f = fit_power_law(lam, mag, err, 0.5);
  CHECK(std::abs(f.exponent - 1.0) <= 1e-12);
  CHECK(std::abs(std::exp(f.log_constant) - 5.0) <= 1e-11);
  CHECK(f.residual_rms <= 1e-12);
  CHECK_FALSE(f.used_envelope);

  for (double p : {0.25, 1.0 / 3.0, 0.5, 1.5}) {
    for (std::size_t i = 0; i < lam.size(); ++i) mag[i] = 0.7 * std::pow(lam[i], -p);
    CHECK(std::abs(fit_power_law(lam, mag, err, 1.0).exponent - p) <= 1e-12);
  }
}

TEST_CASE("fit preconditions") {
  std::vector<double> lam = {1, 10, 100, 1000}, mag = {1, 0.1, 0.01, 0.001}, err = {0, 0, 0, 0};
  CHECK_THROWS_AS(fit_power_law(lam, mag, err, 0.5), Error);  // only 2 tail points
  err = {0, 0, 0, 0.001};
  try {
    fit_power_law(lam, mag, err, 1.0);
    FAIL("expected noise floor");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::noise_floor);
  }
}

TEST_CASE("compare_rates") {
  DecayFit f;
  f.exponent = 1.0;
  CHECK(compare_rates(f, 2, 2, 0.05).holds);
  f.exponent = 0.5;
  const auto v = compare_rates(f, 2, 2, 0.05);
  CHECK_FALSE(v.holds);
  CHECK_FALSE(v.explanation.empty());
  f.exponent = 0.25;
  CHECK(compare_rates(f, 1, 4, 0.05).holds);
}

TEST_CASE("zero amplitude sweep") {
  const auto s = lambda_sweep(catalog("fresnel", {{"amp", {0.0}}}), 0.0, 100.0, 2);
  for (const auto& row : s.magnitudes)
    for (double m : row) CHECK(m == 0.0);
}

TEST_CASE("fresnel N=1 magnitudes decrease beyond lambda = 10") {
  const auto s = lambda_sweep(catalog("fresnel"), 1.0, 1e4, 6);
  REQUIRE_FALSE(s.partial());
  for (std::size_t i = 1; i < s.lambdas.size(); ++i)
    if (s.lambdas[i - 1] >= 10.0) CHECK(s.magnitudes[0][i] < s.magnitudes[0][i - 1]);
}

TEST_CASE("sweeps are reproducible") {
  auto inst = catalog("parametric_family");
  const auto a = lambda_sweep(inst, 0.0, 300.0, 4);
  const auto b = lambda_sweep(inst, 0.0, 300.0, 4);
  CHECK(a.magnitudes == b.magnitudes);
  CHECK(a.error_estimates == b.error_estimates);
  REQUIRE(a.magnitudes.size() == 3);
}

TEST_CASE("certificates") {
  const auto rp = lambda_sweep(catalog("radial_power", {{"N", {2}}, {"gamma", {2}}}), 0.0, 1e3, 4);
  const auto c = certify_bound(rp, 2, 2);
  CHECK(c.rate == 1.0);
  CHECK(std::isfinite(c.sup_product));
  CHECK(c.attained_lambda > 0.0);
  CHECK(c.attained_lambda < 1e3);
  CHECK(c.lambda_min == 0.0);
  CHECK(c.lambda_max == doctest::Approx(1e3));

  const auto m4 = lambda_sweep(catalog("monomial_1d", {{"k", {4}}}), 0.0, 1e4, 4);
  const auto cm = certify_bound(m4, 1, 4);
  CHECK(cm.rate == 0.25);
  CHECK(std::isfinite(cm.sup_product));

  // the sup really is the maximum over every grid point
  const auto pf = lambda_sweep(catalog("parametric_family"), 0.0, 1e3, 4);
  const auto cp = certify_bound(pf, 1, 2);
  CHECK(cp.nu_count == 3);
  double brute = 0.0;
  for (const auto& row : pf.magnitudes)
    for (std::size_t i = 0; i < row.size(); ++i)
      brute = std::max(brute, row[i] * std::sqrt(1.0 + pf.lambdas[i]));
  CHECK(cp.sup_product == brute);
  CHECK(cp.attained_nu == pf.nus[cp.attained_nu_index].coords);
}

TEST_CASE("per-nu exponents of the parametric family agree") {
  const auto s = lambda_sweep(catalog("parametric_family"), 10.0, 1e3, 6);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t k = 0; k < s.nus.size(); ++k) {
    const double e = fit_power_law(s, 0.5, k).exponent;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  CHECK(hi - lo <= 0.1);
}

TEST_CASE("monomial k=4 decay exponent") {
  const auto s = lambda_sweep(catalog("monomial_1d", {{"k", {4}}}), 10.0, 1e4, 8);
  CHECK(std::abs(fit_power_law(s).exponent - 0.25) <= 0.05);
}

}  // TEST_SUITE
