#pragma once

// Independent reference computations for the unit tests.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Lagrange polynomial on arbitrary nodes by the explicit product formula.
inline double lagrange_product(const std::vector<double>& x, int i, double t) {
  double v = 1.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (static_cast<int>(m) != i) v *= (t - x[m]) / (x[i] - x[m]);
  }
  return v;
}

/// Composite Simpson rule with n (even) panels; slow but independent of the library.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline std::vector<double> uniform_samples(std::mt19937_64& rng, int n, double a, double b) {
  std::uniform_real_distribution<double> d(a, b);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace oracle
