#pragma once

#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "fracstep/scalar.hpp"

namespace fracstep {

/// ln|Gamma(z)| for any real z away from the poles at 0, -1, -2, ...
/// Uses a Lanczos sum for z >= 0.5 and the reflection identity below that.
double log_abs_gamma(double z);

/// Sign of Gamma(z): +1 for z > 0, alternating between negative integers.
int gamma_sign(double z);

/// Sign choice for the radical in the slope target.
///
/// `Minus` takes f' - sign(f') * sqrt(disc), the smaller-magnitude
/// denominator. That is the branch whose |Z| passes the admissibility test,
/// whichever sign f'(x0) has. `Plus` takes the other one.
enum class Branch { Minus, Plus };

/// T = f(x0) f''(x0) / (f'(x0) +- sqrt(f'(x0)^2 - 2 f(x0) f''(x0))).
double fractional_target(const ScalarProblem& problem, double x0, Branch branch = Branch::Minus);

/// Coefficients of the fixed-point map g(beta) = k1 ln|Gamma(beta+1)| + k0.
struct FittedCoefficients {
  double k1 = 0.0;
  double k0 = 0.0;
};

struct FracOrderProblem {
  ScalarProblem problem;
  double x0 = 0.0;
  double a = 0.0;    // lower limit of the integral, a < xi1 < x0
  double xi1 = 0.0;  // mean-value point
  Branch branch = Branch::Minus;
  double beta0 = 0.0;
  double grid_step = 0.01;
  int steps = 99;
  double tol = 0.01;
  /// When set, the scan runs on these coefficients instead of the computed
  /// ones, e.g. a fit printed to a few decimals.
  std::optional<FittedCoefficients> fitted;
  /// When set (and `fitted` is not), the computed coefficients are rounded to
  /// this many decimals before scanning.
  std::optional<int> coefficient_decimals;

  void validate() const;
};

struct FracOrderResult {
  bool found = false;
  double beta = 0.0;
  double residual = 0.0;
  /// Computed from the problem data, regardless of `fitted`.
  double k1 = 0.0;
  double k0 = 0.0;
  int evaluations = 0;
};

/// k1 = 1/ln(x0-a), k0 = ln(|T|/|f(xi1)|)/ln(x0-a).
FittedCoefficients fitted_coefficients(const FracOrderProblem& fp);

/// Coefficients the scan actually uses: `fitted` if given, else the computed
/// ones, rounded when `coefficient_decimals` is set.
FittedCoefficients scan_coefficients(const FracOrderProblem& fp);

/// |beta - g(beta)| on the scan coefficients.
double beta_residual(const FracOrderProblem& fp, double beta);
double beta_residual(const FittedCoefficients& c, double beta);

/// Downward grid scan beta_i = beta0 - i*grid_step, i = 0..steps; the first
/// point with residual <= tol wins. Grid points with beta+1 within 1e-6 of a
/// gamma pole are skipped.
FracOrderResult beta_scan(const FracOrderProblem& fp);

/// f(xi1) (x0-a)^beta / Gamma(beta+1), with the sign of Gamma tracked.
double mvt_form_value(const FracOrderProblem& fp, double beta);

/// Riemann-Liouville integral (1/Gamma(beta)) * int_a^x0 (x0-s)^(beta-1) f(s) ds
/// by n-point Gauss-Jacobi quadrature. Only beta > 0 is supported.
double rl_integral_quadrature(const Expression& f, double a, double x0, double beta, int n = 64);

struct LineSample {
  double x = 0.0;
  double y_classical = 0.0;
  double y_fractional = 0.0;
};

/// Tangent line at x0 against the secant through (x0, f(x0)) and (x*, 0),
/// sampled on [min(x0,x*) - d, max(x0,x*) + d] with d = |x0 - x*|.
std::vector<LineSample> tangent_line_data(const ScalarProblem& problem, double x0, double x_star,
                                          int samples);

void write_tangent_csv(std::ostream& out, const std::vector<LineSample>& rows);

}  // namespace fracstep
