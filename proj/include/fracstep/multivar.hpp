#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracstep/errors.hpp"
#include "fracstep/expr.hpp"
#include "fracstep/scalar.hpp"

namespace fracstep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Nonlinear system G(X) = 0 together with the least-squares objective
/// F = 1/2 sum G_k^2 and every derivative tree the solvers need.
class SystemProblem {
 public:
  explicit SystemProblem(std::vector<Expression> equations);

  static SystemProblem parse(const std::vector<std::string>& equations, VariableList variables);

  std::size_t dimension() const noexcept { return variables_.size(); }
  std::size_t equation_count() const noexcept { return equations_.size(); }
  const VariableList& variables() const noexcept { return variables_; }

  const std::vector<Expression>& equations() const noexcept { return equations_; }
  const Expression& objective() const noexcept { return objective_; }
  const Expression& gradient_tree(std::size_t i) const { return gradient_.at(i); }
  const Expression& hessian_tree(std::size_t i, std::size_t j) const {
    return hessian_.at(i * dimension() + j);
  }
  const Expression& jacobian_tree(std::size_t k, std::size_t i) const {
    return jacobian_.at(k * dimension() + i);
  }

  double objective_at(const Vector& x) const;
  Vector residuals_at(const Vector& x) const;
  /// Symbolic gradient of F.
  Vector gradient_at(const Vector& x) const;
  Matrix hessian_at(const Vector& x) const;

 private:
  void check_point(const Vector& x) const;

  VariableList variables_;
  std::vector<Expression> equations_;
  Expression objective_;
  std::vector<Expression> gradient_;
  std::vector<Expression> hessian_;  // n x n, row-major; (i,j) and (j,i) share a tree
  std::vector<Expression> jacobian_;  // m x n, row-major
};

SystemProblem build_objective(std::vector<Expression> equations);

/// Sum of the first partials of F at x0.
double directional_first(const SystemProblem& sp, const Vector& x0);

/// Sum of every Hessian entry of F at x0 (cross terms counted twice).
double directional_second(const SystemProblem& sp, const Vector& x0);

struct SystemCandidate {
  double z = 0.0;
  bool admissible = false;  // |z| < 1
  Vector point;             // x0 + z * ones
  double objective = 0.0;
};

struct SystemStepReport {
  Vector x0;
  double objective = 0.0;  // F(x0)
  double df = 0.0;
  double d2f = 0.0;
  double delta = 0.0;  // df^2 - 2 F d2f
  bool linear = false;
  std::vector<SystemCandidate> candidates;  // sorted by |z|
};

/// Equal-coordinate step: solves d2f Z^2 + 2 df Z + 2F = 0 and moves every
/// coordinate by the same Z. Throws NoRealStepError when delta < 0.
SystemStepReport system_step_candidates(const SystemProblem& sp, const Vector& x0);

/// X0 with the coordinates selected by `mask` (bit i -> coordinate i) taken
/// from `candidate`.
Vector mix_coordinates(const Vector& x0, const Vector& candidate, std::uint32_t mask);

struct HybridChoice {
  Vector point;
  double objective = 0.0;
  std::size_t candidate = 0;  // index into the report's candidates
  std::uint32_t mask = 0;
};

inline constexpr std::size_t kMaxHybridDimension = 12;

/// Best point over every non-empty coordinate mix of x0 with each candidate
/// in `pool` (indices into report.candidates).
HybridChoice best_hybrid(const SystemProblem& sp, const SystemStepReport& report,
                         const std::vector<std::size_t>& pool);

enum class SystemStrategy { BestCandidate, Hybrid };

struct SystemTraceRow {
  int iteration = 0;
  Vector x;
  double objective = 0.0;
  std::optional<double> z;
  bool admissible = false;
  std::optional<double> delta;
};

struct SystemTrace {
  std::vector<SystemTraceRow> rows;
  Termination termination = Termination::Converged;
  bool criterion_violated = false;

  int steps() const { return rows.empty() ? 0 : static_cast<int>(rows.size()) - 1; }
};

class SystemSolveError : public Error {
 public:
  SystemSolveError(ErrorKind kind, const std::string& message, SystemTrace trace)
      : Error(kind, message), trace_(std::move(trace)) {}

  const SystemTrace& trace() const noexcept { return trace_; }

 private:
  SystemTrace trace_;
};

/// Repeats the equal-coordinate step until F <= tol or `max_iter` steps.
/// BestCandidate keeps the admissible candidate with least F; Hybrid also
/// considers every coordinate mix of x0 with each candidate (n <= 12).
SystemTrace system_solve(const SystemProblem& sp, const Vector& x0, double tol, int max_iter,
                         SystemStrategy strategy);

/// J(k, i) = dG_k/dx_i.
Matrix jacobian_eval(const SystemProblem& sp, const Vector& x0);

/// x - gamma * J(x)^T G(x).
Vector gd_step(const SystemProblem& sp, const Vector& x, double gamma);

struct GDRow {
  int iteration = 0;
  Vector x;
  double objective = 0.0;
  double gradient_norm = 0.0;
};

struct GDTrace {
  std::vector<GDRow> rows;
  double gamma = 0.0;
  Termination termination = Termination::Converged;

  int iterations() const { return rows.empty() ? 0 : static_cast<int>(rows.size()) - 1; }
};

GDTrace gd_run(const SystemProblem& sp, const Vector& x0, double gamma, double f_target,
               int max_iter);

}  // namespace fracstep
