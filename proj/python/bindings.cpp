#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

#include "fracstep/fracorder.hpp"
#include "fracstep/multivar.hpp"
#include "fracstep/repro.hpp"
#include "fracstep/scalar.hpp"

namespace py = pybind11;
using namespace fracstep;

namespace {

py::dict step_report_dict(const StepReport& rep) {
  py::list roots;
  for (const auto& r : rep.roots) {
    py::dict d;
    d["z"] = r.z;
    d["admissible"] = r.admissible;
    d["candidate"] = r.candidate;
    roots.append(d);
  }
  py::dict out;
  out["x0"] = rep.x0;
  out["f"] = rep.f0;
  out["df"] = rep.f1;
  out["d2f"] = rep.f2;
  out["discriminant"] = rep.discriminant;
  out["linear"] = rep.linear;
  out["roots"] = roots;
  return out;
}

py::dict trace_dict(const SolveTrace& t) {
  py::list rows;
  for (const auto& r : t.rows) {
    py::dict d;
    d["iteration"] = r.iteration;
    d["x"] = r.x;
    d["f"] = r.fx;
    d["z"] = r.z;
    d["admissible"] = r.admissible;
    d["discriminant"] = r.discriminant;
    rows.append(d);
  }
  py::dict out;
  out["rows"] = rows;
  out["termination"] = std::string(to_string(t.termination));
  out["criterion_violated"] = t.criterion_violated;
  return out;
}

SystemProblem make_system(const std::vector<std::string>& equations,
                          const std::vector<std::string>& variables) {
  return SystemProblem::parse(equations, variables);
}

}  // namespace

PYBIND11_MODULE(_fracstep, m) {
  m.doc() = "Second-order Taylor root finding and fractional-order recovery";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<NoRealStepError>(m, "NoRealStepError", base.ptr());

  m.def(
      "evaluate",
      [](const std::string& text, const std::map<std::string, double>& point) {
        VariableList vars;
        for (const auto& [k, v] : point) vars.push_back(k);
        EvalPoint p(point.begin(), point.end());
        return parse_expression(text, vars).evaluate(p);
      },
      py::arg("expr"), py::arg("point") = std::map<std::string, double>{});
  m.def(
      "derivative",
      [](const std::string& text, const std::string& var) {
        return differentiate(parse_expression(text, {var}), var).to_string();
      },
      py::arg("expr"), py::arg("var") = "x");

  m.def(
      "step_candidates",
      [](const std::string& expr, double x0, const std::string& var) {
        return step_report_dict(step_candidates(ScalarProblem::parse(expr, var), x0));
      },
      py::arg("expr"), py::arg("x0"), py::arg("var") = "x");
  m.def(
      "solve",
      [](const std::string& expr, double x0, double tol, int max_iter, bool iterate,
         const std::string& var) {
        auto mode = iterate ? SolveMode::Iterate : SolveMode::SingleStep;
        return trace_dict(halley_variant_solve(ScalarProblem::parse(expr, var), x0, tol,
                                               max_iter, mode));
      },
      py::arg("expr"), py::arg("x0"), py::arg("tol") = 1e-10, py::arg("max_iter") = 50,
      py::arg("iterate") = true, py::arg("var") = "x");
  m.def(
      "newton",
      [](const std::string& expr, double x0, double tol, int max_iter, const std::string& var) {
        return trace_dict(newton_solve(ScalarProblem::parse(expr, var), x0, tol, max_iter));
      },
      py::arg("expr"), py::arg("x0"), py::arg("tol") = 1e-10, py::arg("max_iter") = 50,
      py::arg("var") = "x");

  m.def("log_abs_gamma", &log_abs_gamma, py::arg("z"));
  m.def("gamma_sign", &gamma_sign, py::arg("z"));
  m.def(
      "fractional_target",
      [](const std::string& expr, double x0, bool plus) {
        return fractional_target(ScalarProblem::parse(expr), x0,
                                 plus ? Branch::Plus : Branch::Minus);
      },
      py::arg("expr"), py::arg("x0"), py::arg("plus") = false);
  m.def(
      "beta_scan",
      [](const std::string& expr, double x0, double a, double xi1, double beta0, double tol,
         double step, int steps, std::optional<int> decimals,
         std::optional<std::pair<double, double>> fitted) {
        FracOrderProblem fp{ScalarProblem::parse(expr), x0, a, xi1};
        fp.beta0 = beta0;
        fp.tol = tol;
        fp.grid_step = step;
        fp.steps = steps;
        fp.coefficient_decimals = decimals;
        if (fitted) fp.fitted = FittedCoefficients{fitted->first, fitted->second};
        auto r = beta_scan(fp);
        py::dict out;
        out["found"] = r.found;
        out["beta"] = r.found ? py::cast(r.beta) : py::none();
        out["residual"] = r.found ? py::cast(r.residual) : py::none();
        out["k1"] = r.k1;
        out["k0"] = r.k0;
        out["evaluations"] = r.evaluations;
        return out;
      },
      py::arg("expr"), py::arg("x0"), py::arg("a"), py::arg("xi1"), py::arg("beta0"),
      py::arg("tol") = 0.01, py::arg("step") = 0.01, py::arg("steps") = 99,
      py::arg("decimals") = py::none(), py::arg("fitted") = py::none());
  m.def(
      "rl_integral",
      [](const std::string& expr, double a, double x0, double beta, int n) {
        return rl_integral_quadrature(parse_expression(expr, {"x"}), a, x0, beta, n);
      },
      py::arg("expr"), py::arg("a"), py::arg("x0"), py::arg("beta"), py::arg("n") = 64);

  py::class_<SystemProblem>(m, "System")
      .def(py::init(&make_system), py::arg("equations"), py::arg("variables"))
      .def_property_readonly("variables", &SystemProblem::variables)
      .def("objective", &SystemProblem::objective_at, py::arg("x"))
      .def("residuals", &SystemProblem::residuals_at, py::arg("x"))
      .def("gradient", &SystemProblem::gradient_at, py::arg("x"))
      .def("hessian", &SystemProblem::hessian_at, py::arg("x"))
      .def("jacobian", [](const SystemProblem& sp, const Vector& x) { return jacobian_eval(sp, x); })
      .def(
          "step_candidates",
          [](const SystemProblem& sp, const Vector& x) {
            auto rep = system_step_candidates(sp, x);
            py::list cands;
            for (const auto& c : rep.candidates) {
              py::dict d;
              d["z"] = c.z;
              d["admissible"] = c.admissible;
              d["point"] = c.point;
              d["objective"] = c.objective;
              cands.append(d);
            }
            py::dict out;
            out["objective"] = rep.objective;
            out["df"] = rep.df;
            out["d2f"] = rep.d2f;
            out["delta"] = rep.delta;
            out["candidates"] = cands;
            return out;
          },
          py::arg("x"))
      .def("gd_step", [](const SystemProblem& sp, const Vector& x,
                         double gamma) { return gd_step(sp, x, gamma); },
           py::arg("x"), py::arg("gamma"))
      .def(
          "gd_run",
          [](const SystemProblem& sp, const Vector& x0, double gamma, double f_target,
             int max_iter) {
            auto t = gd_run(sp, x0, gamma, f_target, max_iter);
            py::dict out;
            out["x"] = t.rows.back().x;
            out["objective"] = t.rows.back().objective;
            out["iterations"] = t.iterations();
            out["termination"] = std::string(to_string(t.termination));
            return out;
          },
          py::arg("x0"), py::arg("gamma"), py::arg("f_target"), py::arg("max_iter") = 1000);

  m.def("example_system", &example_system);
  m.def("repro_suite", [](double scale) {
    ReproOptions options;
    options.scan_tolerance_scale = scale;
    py::list rows;
    for (const auto& r : repro_suite(options)) {
      py::dict d;
      d["id"] = r.id;
      d["expected"] = r.expected;
      d["got"] = r.got;
      d["tolerance"] = r.tolerance;
      d["pass"] = r.pass;
      rows.append(d);
    }
    return rows;
  }, py::arg("scan_tolerance_scale") = 1.0);
}
