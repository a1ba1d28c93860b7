#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/errors.hpp"
#include "fracstep/expr.hpp"

namespace fracstep {

/// One-variable function together with its first two symbolic derivatives.
class ScalarProblem {
 public:
  explicit ScalarProblem(Expression f);

  /// Parses `text` as a function of `variable`.
  static ScalarProblem parse(std::string_view text, std::string variable = "x");

  const Expression& f() const noexcept { return f_; }
  const Expression& df() const noexcept { return df_; }
  const Expression& d2f() const noexcept { return d2f_; }

  double value(double x) const;
  double first(double x) const;
  double second(double x) const;

 private:
  Expression f_;
  Expression df_;
  Expression d2f_;
};

/// Below this |f''| the step quadratic degenerates to the Newton equation.
inline constexpr double kCurvatureEpsilon = 1e-12;
/// Below this |f'| a Newton step is refused.
inline constexpr double kSlopeEpsilon = 1e-14;

struct StepRoot {
  double z = 0.0;
  bool admissible = false;  // |z| < 1
  double candidate = 0.0;   // x0 + z
};

/// Roots of f''Z^2 + 2f'Z + 2f = 0 at x0, sorted by |Z| ascending.
struct StepReport {
  double x0 = 0.0;
  double f0 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double discriminant = 0.0;  // f'^2 - 2 f f''
  bool linear = false;        // Newton fallback taken (|f''| tiny)
  std::vector<StepRoot> roots;

  bool any_admissible() const noexcept;
  /// Smallest admissible |Z|, or the smallest |Z| overall when none qualify.
  const StepRoot& best() const;
};

double newton_step(const ScalarProblem& problem, double x0);

StepReport step_candidates(const ScalarProblem& problem, double x0);

enum class SolveMode { SingleStep, Iterate };

enum class Termination {
  Converged,
  SingleStep,
  MaxIterations,
  NoRealStep,
  NonFinite,
};

std::string_view to_string(Termination t) noexcept;

struct TraceRow {
  int iteration = 0;
  double x = 0.0;
  double fx = 0.0;
  std::optional<double> z;  // step taken from this row, if any
  bool admissible = false;
  std::optional<double> discriminant;
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  Termination termination = Termination::Converged;
  bool criterion_violated = false;  // some step used an inadmissible |Z| >= 1

  double final_x() const { return rows.back().x; }
  double final_f() const { return rows.back().fx; }
  int steps() const { return rows.empty() ? 0 : static_cast<int>(rows.size()) - 1; }
};

/// Failure raised by a driver; carries the trace accumulated so far.
class SolveError : public Error {
 public:
  SolveError(ErrorKind kind, const std::string& message, SolveTrace trace)
      : Error(kind, message), trace_(std::move(trace)) {}

  const SolveTrace& trace() const noexcept { return trace_; }

 private:
  SolveTrace trace_;
};

/// Second-order Taylor root solver.
///
/// In single-step mode one correction is applied from x0. In iterate mode the
/// correction is repeated from the chosen candidate until |f(x)| <= tol or
/// `max_iter` steps have been taken. Among admissible roots the smallest |Z|
/// wins; when none is admissible the smallest |Z| is still taken and the
/// trace is flagged `criterion_violated`.
SolveTrace halley_variant_solve(const ScalarProblem& problem, double x0, double tol,
                                int max_iter, SolveMode mode);

/// Classical Newton iteration, for comparison runs.
SolveTrace newton_solve(const ScalarProblem& problem, double x0, double tol, int max_iter);

}  // namespace fracstep
