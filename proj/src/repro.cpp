#include "fracstep/repro.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "fracstep/format.hpp"

namespace fracstep {

ScalarProblem quadratic_example() { return ScalarProblem::parse("x^2+3*x+1"); }

ScalarProblem cubic_example() { return ScalarProblem::parse("x^3+2*x^2-4*x-8"); }

SystemDefinition example_system_definition() {
  return {{"x1", "x2", "x3"},
          {"3*x1-cos(x2*x3)-3/2", "4*x1^2-625*x2^2+2*x2-1",
           "exp(-x1*x2)+20*x3+(10*pi-3)/3"}};
}

SystemProblem example_system() {
  auto def = example_system_definition();
  return SystemProblem::parse(def.equations, def.variables);
}

namespace {

class Table {
 public:
  void add(std::string id, std::string description, double expected, double tolerance,
           CheckKind kind, const std::function<double()>& compute) {
    ReproRow row{std::move(id), std::move(description), expected,
                 std::numeric_limits<double>::quiet_NaN(), tolerance, kind, false};
    try {
      row.got = compute();
    } catch (const std::exception& e) {
      row.description += " [error: " + std::string(e.what()) + "]";
    }
    switch (kind) {
      case CheckKind::Near: row.pass = std::fabs(row.got - expected) <= tolerance; break;
      case CheckKind::Below: row.pass = row.got < expected; break;
      case CheckKind::AtLeast: row.pass = row.got >= expected; break;
      case CheckKind::AtMost: row.pass = row.got <= expected; break;
    }
    rows_.push_back(std::move(row));
  }

  void near(std::string id, std::string d, double expected, double tol,
            const std::function<double()>& f) {
    add(std::move(id), std::move(d), expected, tol, CheckKind::Near, f);
  }

  std::vector<ReproRow> take() { return std::move(rows_); }

 private:
  std::vector<ReproRow> rows_;
};

double count_admissible(const StepReport& rep) {
  double n = 0;
  for (const auto& r : rep.roots) n += r.admissible ? 1 : 0;
  return n;
}

FracOrderProblem scan_problem(ScalarProblem p, double x0, double a, double xi1, double beta0,
                              double tol, FittedCoefficients fitted) {
  FracOrderProblem fp{std::move(p), x0, a, xi1};
  fp.beta0 = beta0;
  fp.tol = tol;
  fp.fitted = fitted;
  return fp;
}

Vector point(double a, double b, double c) { return Vector{{a, b, c}}; }

double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

std::vector<ReproRow> repro_suite(const ReproOptions& options) {
  Table t;
  const auto quad = quadratic_example();
  const auto cubic = cubic_example();
  const double sqrt5 = std::sqrt(5.0);

  auto single = [](const ScalarProblem& p, double x0) {
    return step_candidates(p, x0).best().candidate;
  };

  // Scalar step, quadratic.
  t.near("ex1.x0=0.5.rounded", "single step from 0.5 vs the 3-decimal root", -0.381, 5e-3,
         [&] { return single(quad, 0.5); });
  t.near("ex1.x0=0.5.exact", "single step from 0.5 vs (-3+sqrt5)/2", (-3.0 + sqrt5) / 2.0, 1e-10,
         [&] { return single(quad, 0.5); });
  t.near("ex1.x0=-3.5.rounded", "single step from -3.5 vs the 3-decimal root", -2.619, 5e-3,
         [&] { return single(quad, -3.5); });
  t.near("ex1.x0=-3.5.exact", "single step from -3.5 vs (-3-sqrt5)/2", (-3.0 - sqrt5) / 2.0,
         1e-10, [&] { return single(quad, -3.5); });
  t.near("ex1.x0=5.admissible", "admissible roots at x0=5", 0.0, 0.0,
         [&] { return count_admissible(step_candidates(quad, 5.0)); });

  // Scalar step, cubic.
  t.near("ex2.x0=2.5.|Z|", "smallest |Z| at 2.5", 0.508, 1e-3,
         [&] { return std::fabs(step_candidates(cubic, 2.5).best().z); });
  t.near("ex2.x0=2.5.candidate", "single step from 2.5", 2.0, 1e-2,
         [&] { return single(cubic, 2.5); });
  t.near("ex2.iterate.root", "iterated from 2.5, tol 1e-10", 2.0, 1e-10, [&] {
    return halley_variant_solve(cubic, 2.5, 1e-10, 50, SolveMode::Iterate).final_x();
  });
  t.add("ex2.iterate.steps", "iterations from 2.5", 3.0, 0.0, CheckKind::AtMost, [&] {
    return static_cast<double>(
        halley_variant_solve(cubic, 2.5, 1e-10, 50, SolveMode::Iterate).steps());
  });
  t.near("ex2.x0=-2.candidate", "f(-2)=0 gives Z=0", -2.0, 0.0,
         [&] { return single(cubic, -2.0); });
  t.near("ex2.x0=3.discriminant", "discriminant at 3 (positive, not negative)", 125.0, 1e-6,
         [&] { return step_candidates(cubic, 3.0).discriminant; });
  t.near("ex2.x0=3.admissible", "admissible roots at x0=3", 0.0, 0.0,
         [&] { return count_admissible(step_candidates(cubic, 3.0)); });

  // Fractional order recovery, scanning on 3-4 decimal fitted equations.
  const double s = options.scan_tolerance_scale;
  const auto ex3a = scan_problem(quad, 0.5, 0.0, 0.25, -2.01, 0.013 * s, {-1.443, -0.784});
  const auto ex3b = scan_problem(quad, -3.5, -5.0, -4.25, -4.01, 0.013 * s, {2.466, -1.738});
  const auto ex4 = scan_problem(cubic, 2.5, 2.0, 2.25, -3.01, 0.009 * s, {-1.442, -2.1418});
  auto scanned = [](const FracOrderProblem& fp) {
    auto r = beta_scan(fp);
    return r.found ? r.beta : std::numeric_limits<double>::quiet_NaN();
  };
  t.near("ex3.root1.beta", "beta scan from -2.01", -2.86, 1e-9, [&] { return scanned(ex3a); });
  t.near("ex3.root2.beta", "beta scan from -4.01", -4.38, 1e-9, [&] { return scanned(ex3b); });
  t.near("ex4.beta", "beta scan from -3.01", -3.21, 1e-9, [&] { return scanned(ex4); });
  t.near("ex4.x0=-2.found", "beta scan at the double root", 0.0, 0.0, [&] {
    FracOrderProblem fp{cubic, -2.0, -2.5, -2.25};
    fp.beta0 = -3.01;
    fp.tol = 0.009;
    return beta_scan(fp).found ? 1.0 : 0.0;
  });

  auto computed = [](FracOrderProblem fp) {
    fp.fitted.reset();
    return fitted_coefficients(fp);
  };
  t.near("ex3.root1.k1", "computed k1", -1.443, 1e-3, [&] { return computed(ex3a).k1; });
  t.near("ex3.root1.k0", "computed k0", -0.784, 2e-3, [&] { return computed(ex3a).k0; });
  t.near("ex3.root2.k1", "computed k1", 2.466, 1e-3, [&] { return computed(ex3b).k1; });
  t.near("ex3.root2.k0", "computed k0", -1.738, 2e-3, [&] { return computed(ex3b).k0; });
  t.near("ex4.k1", "computed k1", -1.442, 1e-3, [&] { return computed(ex4).k1; });
  t.near("ex4.k0", "computed k0", -2.1418, 2e-3, [&] { return computed(ex4).k0; });

  // Multivariate system.
  const auto sys = example_system();
  const Vector origin = Vector::Zero(3);
  const Vector guess = point(2.0 / 3.0, 0.0032, -0.523);
  t.near("ex5.F(0)", "objective at the origin", 58.456, 5e-3,
         [&] { return sys.objective_at(origin); });
  t.near("ex5.F(guess)", "objective at (2/3, 0.0032, -0.523)", 0.427, 1e-3,
         [&] { return sys.objective_at(guess); });
  t.add("ex5.delta(0)", "delta at the origin", 0.0, 0.0, CheckKind::Below, [&] {
    try {
      return system_step_candidates(sys, origin).delta;
    } catch (const NoRealStepError& e) {
      return e.discriminant();
    }
  });
  t.add("ex5.delta(1/2)", "delta at (1/2, 0.0032, -0.523)", 0.0, 0.0, CheckKind::Below, [&] {
    try {
      return system_step_candidates(sys, point(0.5, 0.0032, -0.523)).delta;
    } catch (const NoRealStepError& e) {
      return e.discriminant();
    }
  });
  t.add("ex5.delta(2/3)", "delta at (2/3, 0.0032, -0.523)", 0.0, 0.0, CheckKind::AtLeast,
        [&] { return system_step_candidates(sys, guess).delta; });
  t.near("ex5.candidate1.F", "F at the negative-Z candidate", 0.44, 5e-3,
         [&] { return system_step_candidates(sys, guess).candidates.at(0).objective; });
  t.near("ex5.candidate2.F", "F at the positive-Z candidate", 0.4, 5e-3,
         [&] { return system_step_candidates(sys, guess).candidates.at(1).objective; });
  t.near("ex5.hybrid.F", "F after taking x1 from the first candidate", 0.358, 1e-3, [&] {
    auto rep = system_step_candidates(sys, guess);
    return sys.objective_at(mix_coordinates(guess, rep.candidates.at(0).point, 0b001));
  });

  // Gradient descent baseline.
  t.near("gd.J(0)", "max |J(0) - diag(3,2,20)|", 0.0, 1e-12, [&] {
    Matrix expected = Vector{{3.0, 2.0, 20.0}}.asDiagonal();
    return (jacobian_eval(sys, origin) - expected).cwiseAbs().maxCoeff();
  });
  t.near("gd.step(0)", "max coordinate error of one step from 0", 0.0, 1e-6, [&] {
    return max_abs_diff(gd_step(sys, origin, 1e-3), point(0.0075, 0.002, -0.20944));
  });
  t.near("gd.F(step(0))", "F after one step from 0", 23.306, 1e-2,
         [&] { return sys.objective_at(gd_step(sys, origin, 1e-3)); });
  t.near("gd.step(guess)", "max coordinate error of one step from the guess", 0.0, 1e-5, [&] {
    return max_abs_diff(gd_step(sys, guess, 1e-3), point(0.66402, 0.00476, -0.52319));
  });
  t.near("gd.F(step(guess))", "F after one step from the guess", 0.417, 1e-3,
         [&] { return sys.objective_at(gd_step(sys, guess, 1e-3)); });
  t.near("gd.iterations", "iterations to F <= 0.43 from 0 (band 50..150)", 100.0, 50.0,
         [&] { return static_cast<double>(gd_run(sys, origin, 1e-3, 0.43, 1000).iterations()); });

  return t.take();
}

bool print_repro_table(std::ostream& out, const std::vector<ReproRow>& rows) {
  bool all = true;
  out << "status,id,expected,got,tolerance,check,description\n";
  for (const auto& r : rows) {
    all = all && r.pass;
    const char* check = "";
    switch (r.kind) {
      case CheckKind::Near: check = "near"; break;
      case CheckKind::Below: check = "below"; break;
      case CheckKind::AtLeast: check = "at-least"; break;
      case CheckKind::AtMost: check = "at-most"; break;
    }
    out << (r.pass ? "PASS" : "FAIL") << ',' << r.id << ',' << format_number(r.expected) << ','
        << format_number(r.got) << ',' << format_number(r.tolerance) << ',' << check << ",\""
        << r.description << "\"\n";
  }
  return all;
}

}  // namespace fracstep
