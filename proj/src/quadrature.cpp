#include "corput/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace corput {
namespace {

// Kronrod abscissae, descending, with the shared Gauss nodes at odd indices.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  Complex value;
  double error;
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

Complex gauss_kronrod_15(const std::function<Complex(double)>& f, double a, double b,
                         double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(center);
  Complex kronrod = kKronrodWeights[7] * fc;
  Complex gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const Complex pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  error = std::abs(kronrod - gauss);
  return kronrod;
}

QuadratureResult integrate_panels(const std::function<Complex(double)>& f, double a, double b,
                                  const PhaseVariation& variation, const PanelOptions& options) {
  if (!(b > a)) {
    if (a == b) return {Complex{}, 0.0, 1};
    throw Error(ErrorKind::invalid_argument, "integration interval must satisfy a <= b");
  }
  if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");

  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double min_width = (b - a) * 1e-13;

  // Seed panels so that no panel spans more than one period of the phase.
  std::vector<std::pair<double, double>> seeds;
  std::vector<std::pair<double, double>> stack{{a, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (variation && hi - lo > min_width && variation(lo, hi) > kTwoPi &&
        seeds.size() + stack.size() + 2 <= options.max_panels) {
      const double mid = 0.5 * (lo + hi);
      stack.emplace_back(mid, hi);
      stack.emplace_back(lo, mid);
    } else {
      seeds.emplace_back(lo, hi);
    }
  }

  std::priority_queue<Panel, std::vector<Panel>, ByError> active;
  std::vector<Panel> finished;
  double total_error = 0.0;
  for (auto [lo, hi] : seeds) {
    Panel p{lo, hi, {}, 0.0};
    p.value = gauss_kronrod_15(f, lo, hi, p.error);
    total_error += p.error;
    active.push(p);
  }

  auto collect = [&] {
    std::vector<Panel> all = finished;
    auto copy = active;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadratureResult out;
    for (const auto& p : all) {
      out.value += p.value;
      out.error += p.error;
    }
    out.panels = all.size();
    return out;
  };

  while (total_error > options.tol && !active.empty()) {
    Panel worst = active.top();
    active.pop();
    if (worst.b - worst.a <= min_width) {
      finished.push_back(worst);
      continue;
    }
    if (active.size() + finished.size() + 2 > options.max_panels) {
      active.push(worst);
      throw BudgetExhausted("panel budget of " + std::to_string(options.max_panels) +
                                " exhausted on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            collect());
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left{worst.a, mid, {}, 0.0};
    Panel right{mid, worst.b, {}, 0.0};
    left.value = gauss_kronrod_15(f, left.a, left.b, left.error);
    right.value = gauss_kronrod_15(f, right.a, right.b, right.error);
    total_error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }
  return collect();
}

Extrapolated richardson(const std::function<Complex(double)>& approx, double h_start,
                        int levels) {
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  constexpr double kSafe = 2.0;
  std::vector<std::vector<Complex>> table(levels, std::vector<Complex>(levels));
  double h = h_start;
  table[0][0] = approx(h);
  Extrapolated best{table[0][0], std::numeric_limits<double>::max(), h};
  for (int i = 1; i < levels; ++i) {
    h /= kShrink;
    table[0][i] = approx(h);
    double factor = kShrink2;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (table[j - 1][i] * factor - table[j - 1][i - 1]) / (factor - 1.0);
      factor *= kShrink2;
      const double err = std::max(std::abs(table[j][i] - table[j - 1][i]),
                                  std::abs(table[j][i] - table[j - 1][i - 1]));
      if (err <= best.error) {
        best.error = err;
        best.value = table[j][i];
        best.step = h;
      }
    }
    if (std::abs(table[i][i] - table[i - 1][i - 1]) >= kSafe * best.error) break;
  }
  return best;
}

Complex central_difference(const std::function<Complex(double)>& g, double t, int m, double h) {
  if (m == 0) return g(t);
  Complex sum{};
  for (int k = 0; k <= m; ++k) {
    const double offset = (0.5 * m - k) * h;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(m, k) * g(t + offset);
  }
  return sum / std::pow(h, m);
}

}  // namespace corput
