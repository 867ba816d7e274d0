#include <cmath>
#include <numbers>

#include "corput/error.hpp"
#include "corput/hypothesis_checker.hpp"
#include "corput/report_json.hpp"
#include "doctest.h"

using namespace corput;

namespace {

ProblemInstance poly(std::vector<double> coeffs, int gamma, double delta = 1.0) {
  return catalog("polynomial_1d", {{"coeffs", coeffs}, {"gamma", {double(gamma)}}, {"delta", {delta}}});
}

TaylorData taylor_of(std::vector<Complex> coeffs) {
  TaylorData t;
  t.gamma = static_cast<int>(coeffs.size()) - 1;
  t.coeffs = std::move(coeffs);
  return t;
}

CheckGrid grid_for(const ProblemInstance& inst, int rho_count = 256) {
  return default_grid(inst, {.rho_count = rho_count, .sphere_resolution = 16});
}

// 1D examples written as "F = ..." describe the profile along omega = +1 only
CheckGrid forward_grid(const ProblemInstance& inst) {
  auto g = grid_for(inst);
  g.directions = {SphereNode{Direction({1.0}), 1.0}};
  return g;
}

// brute force minimum / maximum over the same rho samples
template <class F>
double grid_min(const std::vector<double>& rhos, F f) {
  double m = INFINITY;
  for (double r : rhos) m = std::min(m, f(r));
  return m;
}
template <class F>
double grid_max(const std::vector<double>& rhos, F f) {
  double m = -INFINITY;
  for (double r : rhos) m = std::max(m, f(r));
  return m;
}

}  // namespace

TEST_SUITE("hypothesis_checker") {

TEST_CASE("check_F1") {
  CHECK(check_F1(taylor_of({0, 0, 1}), 1e-8).passed);
  const auto bad = check_F1(taylor_of({0, 0.5, 1}), 1e-8);
  CHECK_FALSE(bad.passed);
  CHECK(bad.witness.value == 0.5);
  CHECK(check_F1(taylor_of({1e-15, 0, 1}), 1e-8).passed);
}

TEST_CASE("check_F2") {
  const auto one = check_F2({taylor_of({0, 0, 1})}, 1.0);
  CHECK(one.passed);
  CHECK(*one.constant == 1.0);
  CHECK_THROWS_AS(check_F2({}, 1e-3), Error);

  auto pd = catalog("product_degenerate");
  auto grid = default_grid(pd, {.rho_count = 8, .sphere_resolution = 64});
  REQUIRE(grid.directions.size() == 64);
  const auto f2 = check_F2(taylor_table(pd, grid), 1e-3);
  CHECK_FALSE(f2.passed);
  // brute force: a_4(omega) = w1^2 w2^2 over the same directions
  double brute = INFINITY;
  for (const auto& n : grid.directions) {
    const auto u = n.omega.unit();
    brute = std::min(brute, u[0] * u[0] * u[1] * u[1]);
  }
  CHECK(*f2.constant == doctest::Approx(brute).epsilon(1e-12));
  CHECK(*f2.constant <= 1e-15);
  const auto& w = f2.witness.omega;
  CHECK(std::min(std::abs(w[0]), std::abs(w[1])) <= 1e-15);

  auto pf = catalog("parametric_family");
  const auto f2p = check_F2(taylor_table(pf, grid_for(pf, 8)), 1e-3);
  CHECK(f2p.passed);
  CHECK(*f2p.constant == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("check_F3") {
  auto f = catalog("fresnel");
  CHECK(check_F3(f, Direction({1.0}), {}, grid_for(f).rhos).passed);

  auto s = catalog("sine_1d", {{"delta", {6.0}}});
  CHECK_FALSE(check_F3(s, Direction({1.0}), {}, log_spaced(1e-3, 2.99, 64)).passed);

  auto cd = catalog("complex_damped");
  CHECK(check_F3(cd, Direction({1.0}), {}, grid_for(cd).rhos).passed);
}

TEST_CASE("check_F4") {
  auto m = catalog("monomial_1d", {{"k", {4}}});
  const auto e = check_F4(m, grid_for(m, 32), 5);
  CHECK(e.passed);
  REQUIRE(e.per_order.size() == 6);
  CHECK(e.per_order[4] == doctest::Approx(24.0));
  CHECK(e.per_order[5] == 0.0);

  auto f = catalog("fresnel");
  const auto ef = check_F4(f, grid_for(f), 3);
  CHECK(ef.per_order[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ef.per_order[2] == doctest::Approx(2.0).epsilon(1e-14));

  auto pf = catalog("parametric_family");
  const auto ep = check_F4(pf, grid_for(pf, 32), 3);
  CHECK(ep.passed);
  for (double v : ep.per_order) CHECK(std::isfinite(v));
  // sup |F'''| = 6 |nu| max = 0.6
  CHECK(ep.per_order[3] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("check_amplitude_bounds") {
  auto f = catalog("fresnel", {{"N", {2}}});
  auto grid = grid_for(f, 8);
  const auto one = check_amplitude_bounds(f, grid);
  CHECK(one.passed);
  REQUIRE(one.per_order.size() == 3);  // [2/2] + 1 = 2
  CHECK(one.per_order[0] == 1.0);
  CHECK(one.per_order[1] == 0.0);
  CHECK(one.per_order[2] == 0.0);

  f.amplitude.evaluate = [](std::span<const double> x, const ParameterPoint&) { return Complex(x[0]); };
  const auto lin = check_amplitude_bounds(f, grid);
  CHECK(lin.passed);
  CHECK(lin.per_order[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(lin.per_order[2] <= 1e-8);

  auto f3 = catalog("fresnel", {{"N", {3}}});
  CHECK(check_amplitude_bounds(f3, default_grid(f3, {.rho_count = 4, .sphere_resolution = 4, .lattice_per_axis = 3}))
            .per_order.size() == 3);
}

TEST_CASE("verify_derivative_lower_bound") {
  for (int g : {2, 3, 4, 6}) {
    auto m = catalog("monomial_1d", {{"k", {double(g)}}});
    const auto c = verify_derivative_lower_bound(m, grid_for(m));
    CHECK(c.passed);
    CHECK(c.best_constant == doctest::Approx(g).epsilon(1e-12));
  }
  auto p = poly({0, 0, 1, 1}, 2);
  auto grid = forward_grid(p);
  const auto c = verify_derivative_lower_bound(p, grid);
  CHECK(c.best_constant == doctest::Approx(grid_min(grid.rhos, [](double r) { return 2 + 3 * r; })).epsilon(1e-12));
  CHECK(c.best_constant == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(c.worst_point.rho == grid.rhos.front());

  auto cd = catalog("complex_damped");
  CHECK(verify_derivative_lower_bound(cd, grid_for(cd)).best_constant ==
        doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));

  grid.rhos.insert(grid.rhos.begin(), 0.0);
  try {
    verify_derivative_lower_bound(p, grid);
    FAIL("rho = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("verify_derivative_upper_bound") {
  auto f = catalog("fresnel");
  CHECK(verify_derivative_upper_bound(f, grid_for(f), 2).best_constant == doctest::Approx(1.0).epsilon(1e-14));
  for (int g : {2, 3, 4, 5}) {
    auto m = catalog("monomial_1d", {{"k", {double(g)}}});
    const auto c = verify_derivative_upper_bound(m, grid_for(m), g);
    CHECK(c.passed);
    CHECK(c.best_constant == doctest::Approx(std::tgamma(g)).epsilon(1e-6));
  }
  auto p = poly({0, 0, 1, 0, 1}, 2);
  auto grid = grid_for(p);
  const auto c = verify_derivative_upper_bound(p, grid, 3);
  CHECK(c.passed);
  const double brute = grid_max(grid.rhos, [](double r) { return 24 * r * r * r / (2 * r + 4 * r * r * r); });
  CHECK(c.best_constant == doctest::Approx(brute).epsilon(1e-12));

  auto s = catalog("sine_1d", {{"delta", {4.0}}});
  CheckGrid sg = grid_for(s, 4);
  sg.rhos = {0.5, std::numbers::pi / 2, 1.9};
  try {
    verify_derivative_upper_bound(s, sg, 2);
    FAIL("vanishing derivative accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singularity);
    CHECK(std::string(e.what()).find("1.57") != std::string::npos);
  }
}

TEST_CASE("verify_pi_lower_bound") {
  for (const char* name : {"fresnel", "monomial_1d"}) {
    auto inst = catalog(name, {});
    auto grid = grid_for(inst);
    const auto c = verify_pi_lower_bound(inst, taylor_table(inst, grid), grid);
    CHECK(c.passed);
    CHECK(c.best_constant == doctest::Approx(1.0).epsilon(1e-8));
  }
  auto m4 = catalog("monomial_1d", {{"k", {4}}});
  auto g4 = grid_for(m4);
  CHECK(verify_pi_lower_bound(m4, taylor_table(m4, g4), g4).best_constant == doctest::Approx(1.0).epsilon(1e-8));

  // rho^2 + rho^3 at gamma = 2: ratio (2r + 3r^2) / 2r, minimal at the smallest rho
  auto q = poly({0, 0, 1, 1}, 2, 0.2);
  auto qg = forward_grid(q);
  CHECK(verify_pi_lower_bound(q, taylor_table(q, qg), qg).best_constant ==
        doctest::Approx(grid_min(qg.rhos, [](double r) { return 1 + 1.5 * r; })).epsilon(1e-12));

  // rho^2 - rho^3 at gamma = 3: ratio (2 - 3r) / (2 + 3r) shrinks as delta grows
  double previous = 2.0;
  for (double delta : {0.1, 0.4, 0.8}) {
    auto p = poly({0, 0, 1, -1}, 3, delta);
    auto grid = forward_grid(p);
    const auto c = verify_pi_lower_bound(p, taylor_table(p, grid), grid);
    const double brute = grid_min(grid.rhos, [](double r) { return (2 - 3 * r) / (2 + 3 * r); });
    CHECK(c.best_constant == doctest::Approx(brute).epsilon(1e-10));
    CHECK(c.best_constant > 0.0);
    CHECK(c.best_constant <= 1.0);
    CHECK(c.best_constant < previous);
    previous = c.best_constant;
  }
}

TEST_CASE("check_remainder_bound") {
  auto f = catalog("fresnel");
  auto grid = grid_for(f);
  const auto taylors = taylor_table(f, grid);
  for (int m : {1, 2}) CHECK(check_remainder_bound(f, taylors, grid, m).best_constant <= 1e-12);

  auto p = poly({0, 0, 1, 1}, 2);
  auto pg = grid_for(p);
  const auto c = check_remainder_bound(p, taylor_table(p, pg), pg, 1);
  CHECK(c.best_constant == doctest::Approx(3.0).epsilon(1e-10));

  auto pf = catalog("parametric_family");
  auto fg = grid_for(pf, 32);
  const auto ft = taylor_table(pf, fg);
  for (int m : {1, 2}) {
    const auto r = check_remainder_bound(pf, ft, fg, m);
    CHECK(r.passed);
    CHECK(std::isfinite(r.best_constant));
  }
  CHECK_THROWS_AS(check_remainder_bound(pf, ft, fg, 3), Error);
}

TEST_CASE("check_smooth_extension") {
  auto f = catalog("fresnel");
  const auto certs = check_smooth_extension(f, grid_for(f), 4);
  REQUIRE(certs.size() == 2);
  for (const auto& c : certs) {
    CHECK(c.passed);
    CHECK(c.best_constant == 0.0);
  }

  auto p = poly({0, 0, 1, 0, 0, 1}, 2);
  const auto pc = check_smooth_extension(p, grid_for(p), 5);
  REQUIRE(pc.size() == 3);
  for (const auto& c : pc) CHECK((c.passed && std::isfinite(c.best_constant)));

  auto e = catalog("exp_quadratic", {{"delta", {0.5}}});
  const auto ec = check_smooth_extension(e, grid_for(e, 32), 5);
  REQUIRE(ec.size() == 3);
  for (const auto& c : ec) {
    CAPTURE(c.name);
    CHECK(c.status != CertificateStatus::failed);
    if (c.status == CertificateStatus::passed) CHECK(std::isfinite(c.best_constant));
  }
}

TEST_CASE("analyze reports the seven conditions") {
  auto f = catalog("fresnel", {{"N", {2}}});
  const auto r = analyze(f);
  REQUIRE(r.conditions.size() == 7);
  const char* names[] = {"F1", "F2", "F3", "F4", "A1", "A2", "A4"};
  for (std::size_t i = 0; i < 7; ++i) CHECK(r.conditions[i].name == names[i]);
  CHECK(r.all_passed);
  REQUIRE(r.sufficient_delta.has_value());
  CHECK(*r.sufficient_delta == 1.0);

  const auto bad = analyze(catalog("product_degenerate"));
  CHECK_FALSE(bad.all_passed);
  CHECK_FALSE(bad.condition("F2").passed);

  const auto sine = analyze(catalog("sine_1d"));
  CHECK_FALSE(sine.condition("F1").passed);
}

TEST_CASE("analyze is deterministic") {
  auto pf = catalog("parametric_family");
  CHECK(to_json(analyze(pf)).dump() == to_json(analyze(pf)).dump());
}

TEST_CASE("consistency chain from pi bound and F2 to the derivative lower bound") {
  for (const auto& entry : catalog_entries()) {
    auto inst = catalog(entry.name);
    CAPTURE(entry.name);
    auto grid = default_grid(inst, {.rho_count = 64, .sphere_resolution = 16});
    std::vector<TaylorData> taylors;
    try {
      taylors = taylor_table(inst, grid);
    } catch (const Error&) {
      continue;
    }
    const auto f2 = check_F2(taylors, 1e-3);
    InequalityCertificate pi;
    try {
      pi = verify_pi_lower_bound(inst, taylors, grid);
    } catch (const Error&) {
      continue;
    }
    if (!(f2.passed && pi.passed)) continue;
    // min over the grid of pi / (rho^(gamma-1) sum_j |a_j|)
    double factor = INFINITY;
    for (const auto& t : taylors) {
      double s = 0.0;
      for (int j = 2; j <= t.gamma; ++j) s += std::abs(t.coeffs[j]);
      for (double rho : grid.rhos) factor = std::min(factor, pi_value(t, rho) / (std::pow(rho, t.gamma - 1) * s));
    }
    const auto lower = verify_derivative_lower_bound(inst, grid);
    CHECK(lower.passed);
    CHECK(lower.best_constant >= pi.best_constant * *f2.constant * factor * (1 - 1e-9));
  }
}

TEST_CASE("second derivative keeps its sign for real phases passing F1 and F3") {
  for (const char* name : {"fresnel", "monomial_1d", "radial_power", "parametric_family", "exp_quadratic"}) {
    auto inst = catalog(name);
    CAPTURE(name);
    auto grid = default_grid(inst, {.rho_count = 64, .sphere_resolution = 8});
    const auto taylors = taylor_table(inst, grid);
    for (const auto& node : grid.directions)
      for (const auto& nu : grid.nus) {
        if (!check_F3(inst, node.omega, nu, grid.rhos).passed) continue;
        int sign = 0;
        for (double rho : grid.rhos) {
          const double d2 = radial_derivative(inst, rho, node.omega, nu, 2).value.real();
          const int s = (d2 > 1e-12) - (d2 < -1e-12);
          if (s == 0) continue;
          if (sign == 0) sign = s;
          REQUIRE(s == sign);
        }
      }
  }
}

}  // TEST_SUITE
