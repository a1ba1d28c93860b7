#include "fracstep/fracorder.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracstep/format.hpp"

namespace fracstep {

namespace {

constexpr double kPoleRadius = 1e-9;
constexpr double kScanPoleSkip = 1e-6;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool near_pole(double z, double radius) {
  double r = std::round(z);
  return r <= 0.0 && std::fabs(z - r) < radius;
}

double log_gamma_lanczos(double z) {
  z -= 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double log_base(const FracOrderProblem& fp) {
  double l = std::log(fp.x0 - fp.a);
  if (std::fabs(l) < 1e-9) {
    throw Error(ErrorKind::DegenerateBase, "ln(x0 - a) vanishes; x0 - a must differ from 1");
  }
  return l;
}

}  // namespace

double log_abs_gamma(double z) {
  if (!std::isfinite(z)) throw Error(ErrorKind::InvalidArgument, "gamma of non-finite argument");
  if (near_pole(z, kPoleRadius)) {
    throw Error(ErrorKind::GammaPole, "gamma pole at " + format_number(z));
  }
  if (z >= 0.5) return log_gamma_lanczos(z);
  // Gamma(z) Gamma(1-z) = pi / sin(pi z); reduce the sine argument first.
  double frac = z - std::round(z);
  return std::log(std::numbers::pi) - std::log(std::fabs(std::sin(std::numbers::pi * frac))) -
         log_gamma_lanczos(1.0 - z);
}

int gamma_sign(double z) {
  if (z > 0.0) return 1;
  if (near_pole(z, kPoleRadius)) {
    throw Error(ErrorKind::GammaPole, "gamma pole at " + format_number(z));
  }
  return static_cast<long long>(std::floor(z)) % 2 == 0 ? 1 : -1;
}

double fractional_target(const ScalarProblem& problem, double x0, Branch branch) {
  double f0 = problem.value(x0);
  double f1 = problem.first(x0);
  double f2 = problem.second(x0);
  double disc = f1 * f1 - 2.0 * f0 * f2;
  if (disc < 0.0) throw NoRealStepError(disc);
  double root = std::sqrt(disc);
  double s = f1 >= 0.0 ? 1.0 : -1.0;
  double num = f0 * f2;
  double den = branch == Branch::Minus ? f1 - s * root : f1 + s * root;
  if (num == 0.0 && std::fabs(den) <= 1e-12 * std::max(1.0, std::fabs(f1))) {
    throw Error(ErrorKind::IndeterminateTarget, "slope target is 0/0 at x0 = " + format_number(x0));
  }
  if (branch == Branch::Minus && num != 0.0) {
    // f f'' / (f' - s sqrt(D)) == (f' + s sqrt(D)) / 2
    return 0.5 * (f1 + s * root);
  }
  return num / den;
}

void FracOrderProblem::validate() const {
  if (!(a < xi1 && xi1 < x0)) {
    throw Error(ErrorKind::InvalidArgument, "need a < xi1 < x0");
  }
  if (!(grid_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid_step must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be non-negative");
}

FittedCoefficients fitted_coefficients(const FracOrderProblem& fp) {
  fp.validate();
  double l = log_base(fp);
  double target = std::fabs(fractional_target(fp.problem, fp.x0, fp.branch));
  double at_xi = std::fabs(fp.problem.value(fp.xi1));
  if (target == 0.0 || at_xi == 0.0) {
    throw Error(ErrorKind::Domain, "log of zero in the fitted coefficient");
  }
  return {1.0 / l, std::log(target / at_xi) / l};
}

double beta_residual(const FittedCoefficients& c, double beta) {
  double g = c.k1 * log_abs_gamma(beta + 1.0) + c.k0;
  return std::fabs(beta - g);
}

namespace {

FittedCoefficients apply_rounding(const FracOrderProblem& fp, FittedCoefficients c) {
  if (fp.coefficient_decimals) {
    double scale = std::pow(10.0, *fp.coefficient_decimals);
    c.k1 = std::round(c.k1 * scale) / scale;
    c.k0 = std::round(c.k0 * scale) / scale;
  }
  return c;
}

}  // namespace

FittedCoefficients scan_coefficients(const FracOrderProblem& fp) {
  if (fp.fitted) return *fp.fitted;
  return apply_rounding(fp, fitted_coefficients(fp));
}

double beta_residual(const FracOrderProblem& fp, double beta) {
  if (!fp.fitted) fp.validate();
  log_base(fp);
  return beta_residual(scan_coefficients(fp), beta);
}

FracOrderResult beta_scan(const FracOrderProblem& fp) {
  fp.validate();
  FracOrderResult result;
  result.k1 = result.k0 = std::numeric_limits<double>::quiet_NaN();
  try {
    auto computed = fitted_coefficients(fp);
    result.k1 = computed.k1;
    result.k0 = computed.k0;
  } catch (const Error& e) {
    // No slope target means no order to recover.
    if (e.kind() != ErrorKind::IndeterminateTarget && e.kind() != ErrorKind::NoRealStep) throw;
    if (!fp.fitted) return result;
  }
  const FittedCoefficients coeffs =
      fp.fitted.value_or(apply_rounding(fp, FittedCoefficients{result.k1, result.k0}));

  for (int i = 0; i <= fp.steps; ++i) {
    double beta = fp.beta0 - i * fp.grid_step;
    if (near_pole(beta + 1.0, kScanPoleSkip)) continue;
    ++result.evaluations;
    double r = beta_residual(coeffs, beta);
    if (r <= fp.tol) {
      result.found = true;
      result.beta = beta;
      result.residual = r;
      return result;
    }
  }
  return result;
}

double mvt_form_value(const FracOrderProblem& fp, double beta) {
  if (!(fp.x0 > fp.a)) throw Error(ErrorKind::InvalidArgument, "need x0 > a");
  double z = beta + 1.0;
  double magnitude = std::exp(beta * std::log(fp.x0 - fp.a) - log_abs_gamma(z));
  return fp.problem.value(fp.xi1) * gamma_sign(z) * magnitude;
}

double rl_integral_quadrature(const Expression& f, double a, double x0, double beta, int n) {
  if (!(beta > 0.0)) {
    throw Error(ErrorKind::UnsupportedOrder, "quadrature needs beta > 0 (integrable kernel)");
  }
  if (n < 64) throw Error(ErrorKind::InvalidArgument, "quadrature needs n >= 64");
  if (!(x0 > a)) throw Error(ErrorKind::InvalidArgument, "need x0 > a");
  if (f.variables().size() != 1) {
    throw Error(ErrorKind::InvalidArgument, "integrand must have exactly one variable");
  }

  // Gauss-Jacobi nodes for the weight (1-s)^(beta-1) on [-1, 1], via the
  // Golub-Welsch eigenproblem of the Jacobi matrix.
  const double al = beta - 1.0;
  const double ab = al;  // al + 0
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n - 1);
  diag(0) = -al / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    double t = 2.0 * k + ab;
    diag(k) = -(al * al) / (t * (t + 2.0));
    sub(k - 1) = std::sqrt(4.0 * k * (k + al) * k * (k + ab) / (t * t * (t + 1.0) * (t - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::NonFinite, "Gauss-Jacobi eigenproblem failed");
  }
  // Total weight mass: int (1-s)^(beta-1) ds = 2^beta / beta.
  const double mass = std::exp(beta * std::numbers::ln2) / beta;

  const double half = 0.5 * (x0 - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = eig.eigenvalues()(i);
    double v0 = eig.eigenvectors()(0, i);
    double xi = a + half * (1.0 + s);
    sum += mass * v0 * v0 * f.evaluate(std::span(&xi, 1));
  }
  return std::exp(beta * std::log(half) - log_abs_gamma(beta)) * sum;
}

std::vector<LineSample> tangent_line_data(const ScalarProblem& problem, double x0, double x_star,
                                          int samples) {
  if (x_star == x0) throw Error(ErrorKind::DegenerateSecant, "x* coincides with x0");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  const double f0 = problem.value(x0);
  const double f1 = problem.first(x0);
  const double d = std::fabs(x0 - x_star);
  const double lo = std::min(x0, x_star) - d;
  const double hi = std::max(x0, x_star) + d;

  std::vector<LineSample> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    double x = i == samples - 1 ? hi : lo + (hi - lo) * i / (samples - 1);
    rows.push_back({x, f0 + f1 * (x - x0), f0 * (x - x_star) / (x0 - x_star)});
  }
  return rows;
}

void write_tangent_csv(std::ostream& out, const std::vector<LineSample>& rows) {
  out << "x,y_classical,y_fractional\n";
  for (const auto& r : rows) {
    out << format_number(r.x) << ',' << format_number(r.y_classical) << ','
        << format_number(r.y_fractional) << '\n';
  }
}

}  // namespace fracstep
