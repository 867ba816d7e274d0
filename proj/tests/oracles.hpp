#pragma once

// Reference computations written independently of the library.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

inline double bump(double r, double delta) {
  const double u = 2.0 * r / delta;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// composite Simpson with n panels (n even)
template <class F>
auto simpson(F f, double a, double b, long n) -> decltype(f(a)) {
  const double h = (b - a) / n;
  decltype(f(a)) sum = f(a) + f(b);
  for (long i = 1; i < n; ++i) sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return sum * (h / 3.0);
}

}  // namespace oracle
