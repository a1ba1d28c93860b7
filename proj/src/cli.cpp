#include "fracstep/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "fracstep/format.hpp"
#include "fracstep/fracorder.hpp"
#include "fracstep/io.hpp"
#include "fracstep/multivar.hpp"
#include "fracstep/repro.hpp"
#include "fracstep/scalar.hpp"

namespace fracstep {

namespace {

/// Raised for bad flag values that CLI11 itself cannot detect.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a solver ran but produced no usable answer.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScalarArgs {
  std::string expr;
  std::string var = "x";
  double x0 = 0.0;
  std::string mode = "single-step";
  double tol = 1e-10;
  int max_iter = 50;
  bool trace = false;
  std::string out;
};

struct FracArgs {
  std::string expr;
  std::string var = "x";
  double x0 = 0.0;
  double a = 0.0;
  double xi1 = 0.0;
  double beta0 = 0.0;
  double tol = 0.01;
  double step = 0.01;
  int steps = 99;
  std::string branch = "minus";
  int decimals = 3;
  std::optional<double> k1;
  std::optional<double> k0;
};

struct TangentArgs {
  std::string expr;
  std::string var = "x";
  double x0 = 0.0;
  std::optional<double> x_star;
  int samples = 101;
  std::string out;
};

struct SystemArgs {
  std::string system;
  std::string x0;
  std::string strategy = "best-candidate";
  double tol = 1e-8;
  int max_iter = 20;
  double gamma = 1e-3;
  double f_target = 1e-8;
  bool trace = false;
  std::string out;
};

ScalarProblem load_scalar(const std::string& expr, const std::string& var) {
  return ScalarProblem(parse_expression(expr, {var}));
}

SystemProblem load_system(const std::string& path) {
  if (path.empty()) throw UsageError("--system is required");
  auto def = load_system_definition(path);
  return SystemProblem::parse(def.equations, def.variables);
}

// Comma-separated components; each may be a constant formula such as 2/3.
Vector parse_point(const std::string& text, std::size_t n) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_expression(item, {}).evaluate(EvalPoint{}));
  if (values.size() != n) {
    throw UsageError("--x0 needs " + std::to_string(n) + " comma-separated values, got " +
                     std::to_string(values.size()));
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(n));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open --out file " + path);
  return f;
}

void print_step_report(std::ostream& out, const StepReport& rep) {
  out << "x0=" << format_number(rep.x0) << " f=" << format_number(rep.f0)
      << " f1=" << format_number(rep.f1) << " f2=" << format_number(rep.f2)
      << " discriminant=" << format_number(rep.discriminant) << (rep.linear ? " linear" : "")
      << '\n';
  for (const auto& r : rep.roots) {
    out << "root Z=" << format_number(r.z) << " |Z|=" << format_number(std::fabs(r.z)) << ' '
        << (r.admissible ? "admissible" : "inadmissible")
        << " candidate=" << format_number(r.candidate) << '\n';
  }
}

void emit_scalar_trace(const ScalarArgs& args, const SolveTrace& trace, std::ostream& out) {
  if (args.trace) write_scalar_trace_csv(out, trace);
  if (!args.out.empty()) {
    auto f = open_out(args.out);
    write_scalar_trace_csv(f, trace);
  }
}

int cmd_solve(const ScalarArgs& args, std::ostream& out, std::ostream& err) {
  auto problem = load_scalar(args.expr, args.var);
  SolveMode mode;
  if (args.mode == "single-step") mode = SolveMode::SingleStep;
  else if (args.mode == "iterate") mode = SolveMode::Iterate;
  else throw UsageError("--mode must be single-step or iterate");

  if (mode == SolveMode::SingleStep) {
    StepReport rep;
    try {
      rep = step_candidates(problem, args.x0);
    } catch (const NoRealStepError& e) {
      throw SolverFailure("no real step: discriminant " + format_number(e.discriminant()) +
                          " < 0");
    }
    print_step_report(out, rep);
    emit_scalar_trace(args, halley_variant_solve(problem, args.x0, args.tol, 1, mode), out);
    if (!rep.any_admissible()) {
      err << "no admissible step (|Z|>=1)\n";
      return kExitSolverFailure;
    }
    out << "x*=" << format_number(rep.best().candidate) << '\n';
    return kExitOk;
  }

  SolveTrace trace;
  try {
    trace = halley_variant_solve(problem, args.x0, args.tol, args.max_iter, mode);
  } catch (const SolveError& e) {
    emit_scalar_trace(args, e.trace(), out);
    throw SolverFailure(e.what());
  }
  emit_scalar_trace(args, trace, out);
  out << "x*=" << format_number(trace.final_x()) << " f=" << format_number(trace.final_f())
      << " iterations=" << trace.steps() << " termination=" << to_string(trace.termination)
      << '\n';
  if (trace.criterion_violated) err << "warning: a step used |Z|>=1\n";
  return trace.termination == Termination::Converged ? kExitOk : kExitSolverFailure;
}

int cmd_newton(const ScalarArgs& args, std::ostream& out) {
  auto problem = load_scalar(args.expr, args.var);
  SolveTrace trace;
  try {
    trace = newton_solve(problem, args.x0, args.tol, args.max_iter);
  } catch (const SolveError& e) {
    emit_scalar_trace(args, e.trace(), out);
    throw SolverFailure(e.what());
  }
  emit_scalar_trace(args, trace, out);
  out << "x*=" << format_number(trace.final_x()) << " f=" << format_number(trace.final_f())
      << " iterations=" << trace.steps() << " termination=" << to_string(trace.termination)
      << '\n';
  return trace.termination == Termination::Converged ? kExitOk : kExitSolverFailure;
}

int cmd_frac_order(const FracArgs& args, std::ostream& out, std::ostream& err) {
  FracOrderProblem fp{load_scalar(args.expr, args.var), args.x0, args.a, args.xi1};
  if (args.branch == "minus") fp.branch = Branch::Minus;
  else if (args.branch == "plus") fp.branch = Branch::Plus;
  else throw UsageError("--branch must be minus or plus");
  fp.beta0 = args.beta0;
  fp.tol = args.tol;
  fp.grid_step = args.step;
  fp.steps = args.steps;
  if (args.k1.has_value() != args.k0.has_value()) throw UsageError("--k1 and --k0 go together");
  if (args.k1) fp.fitted = FittedCoefficients{*args.k1, *args.k0};
  if (args.decimals >= 0) fp.coefficient_decimals = args.decimals;
  try {
    fp.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  try {
    out << "T=" << format_number(fractional_target(fp.problem, fp.x0, fp.branch)) << '\n';
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IndeterminateTarget && e.kind() != ErrorKind::NoRealStep) throw;
    out << "T=" << (e.kind() == ErrorKind::IndeterminateTarget ? "indeterminate" : "complex")
        << '\n';
  }
  auto result = beta_scan(fp);
  out << "k1=" << format_number(result.k1) << " k0=" << format_number(result.k0) << '\n';
  if (result.found || fp.fitted || std::isfinite(result.k1)) {
    auto used = scan_coefficients(fp);
    out << "scan k1=" << format_number(used.k1) << " k0=" << format_number(used.k0) << '\n';
  }
  if (!result.found) {
    err << "no beta found on the grid\n";
    return kExitSolverFailure;
  }
  out << "beta=" << format_number(result.beta) << " residual=" << format_number(result.residual)
      << '\n';
  return kExitOk;
}

int cmd_tangent(const TangentArgs& args, std::ostream& out) {
  auto problem = load_scalar(args.expr, args.var);
  double x_star;
  if (args.x_star) {
    x_star = *args.x_star;
  } else {
    auto rep = step_candidates(problem, args.x0);
    if (!rep.any_admissible()) throw SolverFailure("no admissible step (|Z|>=1); pass --x-star");
    x_star = rep.best().candidate;
  }
  auto rows = tangent_line_data(problem, args.x0, x_star, args.samples);
  if (args.out.empty()) {
    write_tangent_csv(out, rows);
  } else {
    auto f = open_out(args.out);
    write_tangent_csv(f, rows);
  }
  return kExitOk;
}

SystemStrategy parse_strategy(const std::string& s) {
  if (s == "best-candidate") return SystemStrategy::BestCandidate;
  if (s == "hybrid") return SystemStrategy::Hybrid;
  throw UsageError("--strategy must be best-candidate or hybrid");
}

void emit_system_trace(const SystemArgs& args, const VariableList& vars, const SystemTrace& trace,
                       std::ostream& out) {
  if (args.trace) write_system_trace_csv(out, vars, trace);
  if (!args.out.empty()) {
    auto f = open_out(args.out);
    write_system_trace_csv(f, vars, trace);
  }
}

void print_point(std::ostream& out, const Vector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? "," : "") << format_number(x(i));
}

int cmd_solve_system(const SystemArgs& args, std::ostream& out) {
  auto sp = load_system(args.system);
  auto x0 = parse_point(args.x0, sp.dimension());
  auto strategy = parse_strategy(args.strategy);
  SystemTrace trace;
  try {
    trace = system_solve(sp, x0, args.tol, args.max_iter, strategy);
  } catch (const SystemSolveError& e) {
    emit_system_trace(args, sp.variables(), e.trace(), out);
    if (e.kind() == ErrorKind::NoRealStep) {
      const auto& last = e.trace().rows.back();
      throw SolverFailure("no real step: delta=" + format_number(last.delta.value_or(NAN)) +
                          " < 0 at iteration " + std::to_string(last.iteration) +
                          "; choose another X0");
    }
    throw SolverFailure(e.what());
  }
  emit_system_trace(args, sp.variables(), trace, out);
  out << "X=";
  print_point(out, trace.rows.back().x);
  out << " F=" << format_number(trace.rows.back().objective) << " iterations=" << trace.steps()
      << " termination=" << to_string(trace.termination) << '\n';
  return trace.termination == Termination::Converged ? kExitOk : kExitSolverFailure;
}

void emit_gd_trace(const SystemArgs& args, const VariableList& vars, const GDTrace& trace,
                   std::ostream& out) {
  if (args.trace) write_gd_trace_csv(out, vars, trace);
  if (!args.out.empty()) {
    auto f = open_out(args.out);
    write_gd_trace_csv(f, vars, trace);
  }
}

int cmd_gd(const SystemArgs& args, std::ostream& out) {
  auto sp = load_system(args.system);
  auto x0 = parse_point(args.x0, sp.dimension());
  auto trace = gd_run(sp, x0, args.gamma, args.f_target, args.max_iter);
  emit_gd_trace(args, sp.variables(), trace, out);
  out << "X=";
  print_point(out, trace.rows.back().x);
  out << " F=" << format_number(trace.rows.back().objective)
      << " iterations=" << trace.iterations() << " termination=" << to_string(trace.termination)
      << '\n';
  return trace.termination == Termination::Converged ? kExitOk : kExitSolverFailure;
}

int cmd_compare(const SystemArgs& args, std::ostream& out) {
  auto sp = load_system(args.system);
  auto x0 = parse_point(args.x0, sp.dimension());
  auto strategy = parse_strategy(args.strategy);

  SystemTrace taylor;
  std::string taylor_end;
  try {
    taylor = system_solve(sp, x0, args.tol, args.max_iter, strategy);
    taylor_end = std::string(to_string(taylor.termination));
  } catch (const SystemSolveError& e) {
    taylor = e.trace();
    taylor_end = std::string(to_string(taylor.termination));
  }
  GDTrace gd;
  std::string gd_end;
  try {
    gd = gd_run(sp, x0, args.gamma, args.f_target, args.max_iter);
    gd_end = std::string(to_string(gd.termination));
  } catch (const Error&) {
    gd_end = "non-finite";
  }

  out << "iter,F_taylor,F_gd\n";
  const std::size_t n = std::max(taylor.rows.size(), gd.rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    out << i << ',';
    if (i < taylor.rows.size()) out << format_number(taylor.rows[i].objective);
    out << ',';
    if (i < gd.rows.size()) out << format_number(gd.rows[i].objective);
    out << '\n';
  }
  out << "taylor: iterations=" << taylor.steps() << " termination=" << taylor_end << '\n';
  out << "gd: iterations=" << gd.iterations() << " termination=" << gd_end << '\n';
  return kExitOk;
}

int cmd_repro(double scale, std::ostream& out, std::ostream& err) {
  ReproOptions options;
  options.scan_tolerance_scale = scale;
  auto rows = repro_suite(options);
  bool ok = print_repro_table(out, rows);
  auto passed = std::count_if(rows.begin(), rows.end(), [](const ReproRow& r) { return r.pass; });
  err << passed << "/" << rows.size() << " checks passed\n";
  return ok ? kExitOk : kExitSolverFailure;
}

void add_scalar_flags(CLI::App* cmd, ScalarArgs& a) {
  cmd->add_option("--expr", a.expr, "f(x) as an infix formula")->required();
  cmd->add_option("--var", a.var, "variable name")->capture_default_str();
  cmd->add_option("--x0", a.x0, "starting point")->required();
  cmd->add_option("--tol", a.tol, "stop when |f(x)| <= tol")->capture_default_str();
  cmd->add_option("--max-iter", a.max_iter, "iteration cap")->capture_default_str();
  cmd->add_flag("--trace", a.trace, "stream iteration rows as CSV");
  cmd->add_option("--out", a.out, "write the iteration CSV to this file");
}

void add_system_flags(CLI::App* cmd, SystemArgs& a) {
  cmd->add_option("--system", a.system, "JSON system definition")->required();
  cmd->add_option("--x0", a.x0, "starting point, comma separated")->required();
  cmd->add_option("--max-iter", a.max_iter, "iteration cap")->capture_default_str();
  cmd->add_flag("--trace", a.trace, "stream iteration rows as CSV");
  cmd->add_option("--out", a.out, "write the iteration CSV to this file");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order Taylor root finding and fractional-order recovery", "fracstep"};
  app.require_subcommand(1);

  ScalarArgs solve_args;
  auto* solve = app.add_subcommand("solve", "second-order Taylor step solver");
  add_scalar_flags(solve, solve_args);
  solve->add_option("--mode", solve_args.mode, "single-step or iterate")->capture_default_str();

  ScalarArgs newton_args;
  auto* newton = app.add_subcommand("newton", "Newton iteration baseline");
  add_scalar_flags(newton, newton_args);

  FracArgs frac_args;
  auto* frac = app.add_subcommand("frac-order", "recover the fractional order beta by grid scan");
  frac->add_option("--expr", frac_args.expr, "f(x)")->required();
  frac->add_option("--var", frac_args.var, "variable name")->capture_default_str();
  frac->add_option("--x0", frac_args.x0, "point of the slope target")->required();
  frac->add_option("--a", frac_args.a, "lower integration limit")->required();
  frac->add_option("--xi1", frac_args.xi1, "mean-value point, a < xi1 < x0")->required();
  frac->add_option("--beta0", frac_args.beta0, "first grid point")->required();
  frac->add_option("--tol", frac_args.tol, "residual tolerance")->capture_default_str();
  frac->add_option("--step", frac_args.step, "grid step")->capture_default_str();
  frac->add_option("--steps", frac_args.steps, "grid points after beta0")->capture_default_str();
  frac->add_option("--branch", frac_args.branch, "minus or plus")->capture_default_str();
  frac->add_option("--decimals", frac_args.decimals,
                   "round k1, k0 to this many decimals before scanning (-1: exact)")
      ->capture_default_str();
  frac->add_option("--k1", frac_args.k1, "override k1");
  frac->add_option("--k0", frac_args.k0, "override k0");

  TangentArgs tangent_args;
  auto* tangent = app.add_subcommand("tangent", "tangent and secant line samples as CSV");
  tangent->add_option("--expr", tangent_args.expr, "f(x)")->required();
  tangent->add_option("--var", tangent_args.var, "variable name")->capture_default_str();
  tangent->add_option("--x0", tangent_args.x0, "tangent point")->required();
  tangent->add_option("--x-star", tangent_args.x_star, "root (default: single-step candidate)");
  tangent->add_option("--samples", tangent_args.samples, "sample count")->capture_default_str();
  tangent->add_option("--out", tangent_args.out, "CSV file (default: stdout)");

  SystemArgs system_args;
  auto* solve_system = app.add_subcommand("solve-system", "equal-coordinate step solver");
  add_system_flags(solve_system, system_args);
  solve_system->add_option("--strategy", system_args.strategy, "best-candidate or hybrid")
      ->capture_default_str();
  solve_system->add_option("--tol", system_args.tol, "stop when F <= tol")->capture_default_str();

  SystemArgs gd_args;
  gd_args.max_iter = 1000;
  auto* gd = app.add_subcommand("gd", "gradient descent baseline");
  add_system_flags(gd, gd_args);
  gd->add_option("--gamma", gd_args.gamma, "step size")->capture_default_str();
  gd->add_option("--f-target", gd_args.f_target, "stop when F <= target")->capture_default_str();

  SystemArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Taylor step solver against gradient descent");
  add_system_flags(compare, compare_args);
  compare->add_option("--strategy", compare_args.strategy, "best-candidate or hybrid")
      ->capture_default_str();
  compare->add_option("--tol", compare_args.tol, "Taylor solver: stop when F <= tol")
      ->capture_default_str();
  compare->add_option("--gamma", compare_args.gamma, "gradient descent step size")
      ->capture_default_str();
  compare->add_option("--f-target", compare_args.f_target, "gradient descent: stop when F <= target")
      ->capture_default_str();

  double scan_scale = 1.0;
  auto* repro = app.add_subcommand("repro", "run the worked-example reproduction table");
  repro->add_option("--scan-tol-scale", scan_scale, "multiply every beta-scan tolerance")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_args, out, err);
    if (*newton) return cmd_newton(newton_args, out);
    if (*frac) return cmd_frac_order(frac_args, out, err);
    if (*tangent) return cmd_tangent(tangent_args, out);
    if (*solve_system) return cmd_solve_system(system_args, out);
    if (*gd) return cmd_gd(gd_args, out);
    if (*compare) return cmd_compare(compare_args, out);
    if (*repro) return cmd_repro(scan_scale, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverFailure& e) {
    err << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Syntax:
      case ErrorKind::UnknownSymbol:
      case ErrorKind::InvalidArgument:
        return kExitUsage;
      default:
        return kExitSolverFailure;
    }
  }
  return kExitUsage;
}

}  // namespace fracstep
