#include "fracstep/multivar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracstep {

namespace {

Expression least_squares(const std::vector<Expression>& equations) {
  if (equations.empty()) throw Error(ErrorKind::InvalidArgument, "system has no equations");
  const auto& vars = equations.front().shared_variables();
  for (const auto& g : equations) {
    if (g.variables() != *vars) {
      throw Error(ErrorKind::InvalidArgument, "equations are declared over different variables");
    }
  }
  Expression sum = equations.front() * equations.front();
  for (std::size_t k = 1; k < equations.size(); ++k) sum = sum + equations[k] * equations[k];
  return 0.5 * sum;
}

std::span<const double> as_span(const Vector& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

}  // namespace

SystemProblem::SystemProblem(std::vector<Expression> equations)
    : variables_(equations.empty() ? VariableList{} : equations.front().variables()),
      equations_(std::move(equations)),
      objective_(least_squares(equations_)) {
  const std::size_t n = dimension();
  const std::size_t m = equation_count();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "system has no variables");

  gradient_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) gradient_.push_back(differentiate(objective_, i));

  hessian_.assign(n * n, objective_);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      hessian_[i * n + j] = differentiate(gradient_[i], j);
      hessian_[j * n + i] = hessian_[i * n + j];
    }
  }

  jacobian_.reserve(m * n);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) jacobian_.push_back(differentiate(equations_[k], i));
  }
}

SystemProblem SystemProblem::parse(const std::vector<std::string>& equations,
                                   VariableList variables) {
  std::vector<Expression> trees;
  trees.reserve(equations.size());
  for (const auto& text : equations) trees.push_back(parse_expression(text, variables));
  return SystemProblem(std::move(trees));
}

void SystemProblem::check_point(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension()) {
    throw Error(ErrorKind::InvalidArgument,
                "point has " + std::to_string(x.size()) + " entries, system has " +
                    std::to_string(dimension()) + " variables");
  }
}

double SystemProblem::objective_at(const Vector& x) const {
  check_point(x);
  return objective_.evaluate(as_span(x));
}

Vector SystemProblem::residuals_at(const Vector& x) const {
  check_point(x);
  Vector g(static_cast<Eigen::Index>(equation_count()));
  for (std::size_t k = 0; k < equation_count(); ++k) g(k) = equations_[k].evaluate(as_span(x));
  return g;
}

Vector SystemProblem::gradient_at(const Vector& x) const {
  check_point(x);
  Vector g(static_cast<Eigen::Index>(dimension()));
  for (std::size_t i = 0; i < dimension(); ++i) g(i) = gradient_[i].evaluate(as_span(x));
  return g;
}

Matrix SystemProblem::hessian_at(const Vector& x) const {
  check_point(x);
  const auto n = static_cast<Eigen::Index>(dimension());
  Matrix h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      h(i, j) = hessian_[i * n + j].evaluate(as_span(x));
      h(j, i) = h(i, j);
    }
  }
  return h;
}

SystemProblem build_objective(std::vector<Expression> equations) {
  return SystemProblem(std::move(equations));
}

double directional_first(const SystemProblem& sp, const Vector& x0) {
  return sp.gradient_at(x0).sum();
}

double directional_second(const SystemProblem& sp, const Vector& x0) {
  return sp.hessian_at(x0).sum();
}

SystemStepReport system_step_candidates(const SystemProblem& sp, const Vector& x0) {
  SystemStepReport rep;
  rep.x0 = x0;
  rep.objective = sp.objective_at(x0);
  rep.df = directional_first(sp, x0);
  rep.d2f = directional_second(sp, x0);
  if (!std::isfinite(rep.objective) || !std::isfinite(rep.df) || !std::isfinite(rep.d2f)) {
    throw Error(ErrorKind::NonFinite, "F, DF or D2F is not finite at X0");
  }
  rep.delta = rep.df * rep.df - 2.0 * rep.objective * rep.d2f;

  const Vector ones = Vector::Ones(x0.size());
  auto push = [&](double z) {
    SystemCandidate c;
    c.z = z;
    c.admissible = std::fabs(z) < 1.0;
    c.point = x0 + z * ones;
    c.objective = sp.objective_at(c.point);
    rep.candidates.push_back(std::move(c));
  };

  if (rep.objective == 0.0) {
    push(0.0);
    return rep;
  }
  if (std::fabs(rep.d2f) < kCurvatureEpsilon) {
    if (std::fabs(rep.df) < kSlopeEpsilon) {
      throw Error(ErrorKind::DerivativeZero, "DF and D2F both vanish at X0");
    }
    rep.linear = true;
    push(-rep.objective / rep.df);
    return rep;
  }
  if (rep.delta < 0.0) throw NoRealStepError(rep.delta);

  double q = -(rep.df + std::copysign(std::sqrt(rep.delta), rep.df));
  push(q / rep.d2f);
  push(2.0 * rep.objective / q);
  std::sort(rep.candidates.begin(), rep.candidates.end(),
            [](const SystemCandidate& a, const SystemCandidate& b) {
              return std::fabs(a.z) < std::fabs(b.z);
            });
  return rep;
}

Vector mix_coordinates(const Vector& x0, const Vector& candidate, std::uint32_t mask) {
  Vector out = x0;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (mask & (1u << i)) out(i) = candidate(i);
  }
  return out;
}

HybridChoice best_hybrid(const SystemProblem& sp, const SystemStepReport& report,
                         const std::vector<std::size_t>& pool) {
  const std::size_t n = sp.dimension();
  if (n > kMaxHybridDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "coordinate mixing is limited to " + std::to_string(kMaxHybridDimension) +
                    " variables");
  }
  HybridChoice best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (1u << n) - 1u;
  for (std::size_t c : pool) {
    const Vector& cand = report.candidates.at(c).point;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      Vector p = mix_coordinates(report.x0, cand, mask);
      double value;
      try {
        value = sp.objective_at(p);
      } catch (const Error&) {
        continue;
      }
      if (std::isfinite(value) && value < best.objective) {
        best = {std::move(p), value, c, mask};
      }
    }
  }
  if (!std::isfinite(best.objective)) {
    throw Error(ErrorKind::NonFinite, "no coordinate mix evaluates to a finite objective");
  }
  return best;
}

namespace {

[[noreturn]] void fail(SystemTrace& trace, Termination t, const Error& e) {
  trace.termination = t;
  throw SystemSolveError(e.kind(), e.what(), std::move(trace));
}

}  // namespace

SystemTrace system_solve(const SystemProblem& sp, const Vector& x0, double tol, int max_iter,
                         SystemStrategy strategy) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
  if (strategy == SystemStrategy::Hybrid && sp.dimension() > kMaxHybridDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "hybrid strategy is limited to " + std::to_string(kMaxHybridDimension) +
                    " variables");
  }

  SystemTrace trace;
  Vector x = x0;
  for (int iter = 0;; ++iter) {
    SystemTraceRow row;
    row.iteration = iter;
    row.x = x;
    row.objective = sp.objective_at(x);
    if (!std::isfinite(row.objective)) {
      trace.rows.push_back(row);
      fail(trace, Termination::NonFinite, Error(ErrorKind::NonFinite, "F is not finite"));
    }
    if (row.objective <= tol || iter == max_iter) {
      trace.termination =
          row.objective <= tol ? Termination::Converged : Termination::MaxIterations;
      trace.rows.push_back(row);
      return trace;
    }

    SystemStepReport rep;
    try {
      rep = system_step_candidates(sp, x);
    } catch (const NoRealStepError& e) {
      row.delta = e.discriminant();
      trace.rows.push_back(row);
      fail(trace, Termination::NoRealStep, e);
    } catch (const Error& e) {
      trace.rows.push_back(row);
      fail(trace,
           e.kind() == ErrorKind::NonFinite ? Termination::NonFinite : Termination::NoRealStep, e);
    }
    row.delta = rep.delta;

    std::vector<std::size_t> pool;
    for (std::size_t c = 0; c < rep.candidates.size(); ++c) {
      if (rep.candidates[c].admissible) pool.push_back(c);
    }
    if (pool.empty()) {
      trace.criterion_violated = true;
      for (std::size_t c = 0; c < rep.candidates.size(); ++c) pool.push_back(c);
    }

    std::size_t chosen = pool.front();
    Vector next;
    if (strategy == SystemStrategy::Hybrid) {
      auto h = best_hybrid(sp, rep, pool);
      chosen = h.candidate;
      next = std::move(h.point);
    } else {
      for (std::size_t c : pool) {
        if (rep.candidates[c].objective < rep.candidates[chosen].objective) chosen = c;
      }
      next = rep.candidates[chosen].point;
    }
    row.z = rep.candidates[chosen].z;
    row.admissible = rep.candidates[chosen].admissible;
    trace.rows.push_back(row);
    x = std::move(next);
  }
}

Matrix jacobian_eval(const SystemProblem& sp, const Vector& x0) {
  if (static_cast<std::size_t>(x0.size()) != sp.dimension()) {
    throw Error(ErrorKind::InvalidArgument, "point dimension does not match the system");
  }
  const auto m = static_cast<Eigen::Index>(sp.equation_count());
  const auto n = static_cast<Eigen::Index>(sp.dimension());
  Matrix j(m, n);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) j(k, i) = sp.jacobian_tree(k, i).evaluate(as_span(x0));
  }
  return j;
}

Vector gd_step(const SystemProblem& sp, const Vector& x, double gamma) {
  if (gamma < 0.0) throw Error(ErrorKind::InvalidArgument, "gamma must be non-negative");
  return x - gamma * (jacobian_eval(sp, x).transpose() * sp.residuals_at(x));
}

GDTrace gd_run(const SystemProblem& sp, const Vector& x0, double gamma, double f_target,
               int max_iter) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
  GDTrace trace;
  trace.gamma = gamma;
  Vector x = x0;
  for (int iter = 0;; ++iter) {
    Vector g = sp.residuals_at(x);
    Vector grad = jacobian_eval(sp, x).transpose() * g;
    GDRow row{iter, x, 0.5 * g.squaredNorm(), grad.norm()};
    if (!std::isfinite(row.objective) || !std::isfinite(row.gradient_norm)) {
      trace.termination = Termination::NonFinite;
      throw Error(ErrorKind::NonFinite,
                  "gradient descent diverged at iteration " + std::to_string(iter));
    }
    trace.rows.push_back(row);
    if (row.objective <= f_target) {
      trace.termination = Termination::Converged;
      return trace;
    }
    if (iter == max_iter) {
      trace.termination = Termination::MaxIterations;
      return trace;
    }
    x -= gamma * grad;
  }
}

}  // namespace fracstep
