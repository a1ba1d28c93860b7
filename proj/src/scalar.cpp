#include "fracstep/scalar.hpp"

#include <algorithm>
#include <cmath>

namespace fracstep {

ScalarProblem::ScalarProblem(Expression f)
    : f_(std::move(f)), df_(differentiate(f_, 0)), d2f_(differentiate(df_, 0)) {
  if (f_.variables().size() != 1) {
    throw Error(ErrorKind::InvalidArgument, "scalar problem needs exactly one variable");
  }
}

ScalarProblem ScalarProblem::parse(std::string_view text, std::string variable) {
  return ScalarProblem(parse_expression(text, {std::move(variable)}));
}

double ScalarProblem::value(double x) const { return f_.evaluate(std::span(&x, 1)); }
double ScalarProblem::first(double x) const { return df_.evaluate(std::span(&x, 1)); }
double ScalarProblem::second(double x) const { return d2f_.evaluate(std::span(&x, 1)); }

bool StepReport::any_admissible() const noexcept {
  return std::any_of(roots.begin(), roots.end(), [](const StepRoot& r) { return r.admissible; });
}

const StepRoot& StepReport::best() const {
  if (roots.empty()) throw Error(ErrorKind::NoRealStep, "step report has no roots");
  for (const auto& r : roots) {
    if (r.admissible) return r;
  }
  return roots.front();
}

double newton_step(const ScalarProblem& problem, double x0) {
  double f1 = problem.first(x0);
  if (std::fabs(f1) < kSlopeEpsilon) {
    throw Error(ErrorKind::DerivativeZero, "f'(x0) vanishes; Newton step undefined");
  }
  return x0 - problem.value(x0) / f1;
}

StepReport step_candidates(const ScalarProblem& problem, double x0) {
  StepReport rep;
  rep.x0 = x0;
  rep.f0 = problem.value(x0);
  rep.f1 = problem.first(x0);
  rep.f2 = problem.second(x0);
  if (!std::isfinite(rep.f0) || !std::isfinite(rep.f1) || !std::isfinite(rep.f2)) {
    throw Error(ErrorKind::NonFinite, "f, f' or f'' is not finite at x0");
  }
  rep.discriminant = rep.f1 * rep.f1 - 2.0 * rep.f0 * rep.f2;

  auto push = [&](double z) {
    rep.roots.push_back({z, std::fabs(z) < 1.0, x0 + z});
  };

  // Already on a root: covers the 0/0 case where f and f' vanish together.
  if (rep.f0 == 0.0) {
    push(0.0);
    return rep;
  }
  if (std::fabs(rep.f2) < kCurvatureEpsilon) {
    if (std::fabs(rep.f1) < kSlopeEpsilon) {
      throw Error(ErrorKind::DerivativeZero, "f' and f'' both vanish at x0");
    }
    rep.linear = true;
    push(-rep.f0 / rep.f1);
    return rep;
  }
  if (rep.discriminant < 0.0) throw NoRealStepError(rep.discriminant);

  // Cancellation-free pair: q/f'' and 2f/q.
  double q = -(rep.f1 + std::copysign(std::sqrt(rep.discriminant), rep.f1));
  push(q / rep.f2);
  push(2.0 * rep.f0 / q);
  std::sort(rep.roots.begin(), rep.roots.end(),
            [](const StepRoot& a, const StepRoot& b) { return std::fabs(a.z) < std::fabs(b.z); });
  return rep;
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::SingleStep: return "single-step";
    case Termination::MaxIterations: return "max-iterations";
    case Termination::NoRealStep: return "no-real-step";
    case Termination::NonFinite: return "non-finite";
  }
  return "unknown";
}

namespace {

void check_solver_args(double tol, int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
}

[[noreturn]] void fail(SolveTrace& trace, Termination t, const Error& e) {
  trace.termination = t;
  throw SolveError(e.kind(), e.what(), std::move(trace));
}

double checked_value(const ScalarProblem& problem, double x, SolveTrace& trace) {
  if (!std::isfinite(x)) {
    fail(trace, Termination::NonFinite, Error(ErrorKind::NonFinite, "iterate left the reals"));
  }
  double fx = problem.value(x);
  if (!std::isfinite(fx)) {
    fail(trace, Termination::NonFinite, Error(ErrorKind::NonFinite, "f(x) is not finite"));
  }
  return fx;
}

}  // namespace

SolveTrace halley_variant_solve(const ScalarProblem& problem, double x0, double tol,
                                int max_iter, SolveMode mode) {
  check_solver_args(tol, max_iter);
  SolveTrace trace;
  double x = x0;
  for (int iter = 0;; ++iter) {
    TraceRow row{iter, x, checked_value(problem, x, trace), {}, false, {}};
    bool done = false;
    if (mode == SolveMode::SingleStep && iter == 1) {
      trace.termination = Termination::SingleStep;
      done = true;
    } else if (mode == SolveMode::Iterate && std::fabs(row.fx) <= tol) {
      trace.termination = Termination::Converged;
      done = true;
    } else if (iter == max_iter) {
      trace.termination = Termination::MaxIterations;
      done = true;
    }
    if (done) {
      trace.rows.push_back(row);
      return trace;
    }

    StepReport rep;
    try {
      rep = step_candidates(problem, x);
    } catch (const NoRealStepError& e) {
      row.discriminant = e.discriminant();
      trace.rows.push_back(row);
      fail(trace, Termination::NoRealStep, e);
    } catch (const Error& e) {
      trace.rows.push_back(row);
      fail(trace, e.kind() == ErrorKind::NonFinite ? Termination::NonFinite
                                                   : Termination::NoRealStep,
           e);
    }
    const auto& best = rep.best();
    row.z = best.z;
    row.admissible = best.admissible;
    row.discriminant = rep.discriminant;
    trace.criterion_violated = trace.criterion_violated || !best.admissible;
    trace.rows.push_back(row);
    x = best.candidate;
  }
}

SolveTrace newton_solve(const ScalarProblem& problem, double x0, double tol, int max_iter) {
  check_solver_args(tol, max_iter);
  SolveTrace trace;
  double x = x0;
  for (int iter = 0;; ++iter) {
    TraceRow row{iter, x, checked_value(problem, x, trace), {}, true, {}};
    if (std::fabs(row.fx) <= tol || iter == max_iter) {
      trace.termination = std::fabs(row.fx) <= tol ? Termination::Converged
                                                   : Termination::MaxIterations;
      trace.rows.push_back(row);
      return trace;
    }
    double next;
    try {
      next = newton_step(problem, x);
    } catch (const Error& e) {
      trace.rows.push_back(row);
      fail(trace, Termination::NoRealStep, e);
    }
    row.z = next - x;
    trace.rows.push_back(row);
    x = next;
  }
}

}  // namespace fracstep
