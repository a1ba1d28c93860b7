#pragma once

// Independent reference computations used as test oracles. None of these
// route through the library code they are checking.

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Real roots of a x^2 + b x + c, textbook formula in long double.
inline std::vector<double> quadratic_roots(double a, double b, double c) {
  long double A = a, B = b, C = c;
  long double d = B * B - 4 * A * C;
  if (d < 0) return {};
  long double s = std::sqrt(d);
  return {static_cast<double>((-B - s) / (2 * A)), static_cast<double>((-B + s) / (2 * A))};
}

/// Five-point central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double second_derivative(const std::function<double(double)>& f, double x,
                                double h = 1e-3) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

/// ln|Gamma(z)| from the C library.
inline double lgamma_abs(double z) { return std::lgamma(z); }

/// RL integral of s^m over [0, x] of order beta:
/// Gamma(m+1) / Gamma(m+beta+1) * x^(m+beta).
inline double rl_monomial(double m, double x, double beta) {
  return std::exp(std::lgamma(m + 1) - std::lgamma(m + beta + 1)) * std::pow(x, m + beta);
}

/// The three-equation example, hand coded.
inline std::vector<double> example_residuals(const std::vector<double>& x) {
  const double pi = 3.14159265358979323846;
  return {3 * x[0] - std::cos(x[1] * x[2]) - 1.5,
          4 * x[0] * x[0] - 625 * x[1] * x[1] + 2 * x[1] - 1,
          std::exp(-x[0] * x[1]) + 20 * x[2] + (10 * pi - 3) / 3};
}

inline double example_objective(const std::vector<double>& x) {
  double s = 0;
  for (double g : example_residuals(x)) s += g * g;
  return 0.5 * s;
}

/// Gradient of the example objective, J^T G with a hand-differentiated J.
inline std::vector<double> example_gradient(const std::vector<double>& x) {
  auto g = example_residuals(x);
  const double s = std::sin(x[1] * x[2]);
  const double e = std::exp(-x[0] * x[1]);
  const double j[3][3] = {{3, x[2] * s, x[1] * s},
                          {8 * x[0], -1250 * x[1] + 2, 0},
                          {-x[1] * e, -x[0] * e, 20}};
  std::vector<double> out(3, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) out[i] += j[k][i] * g[k];
  }
  return out;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace oracle
