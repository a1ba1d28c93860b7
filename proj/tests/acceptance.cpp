// One line per acceptance criterion; exit status is non-zero if any fails.

#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "fracstep/format.hpp"
#include "fracstep/fracorder.hpp"
#include "fracstep/multivar.hpp"
#include "fracstep/repro.hpp"
#include "fracstep/scalar.hpp"
#include "oracles.hpp"

using namespace fracstep;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

// Worked-example rows from the reproduction table, grouped by criterion.
Outcome from_rows(const std::vector<ReproRow>& rows, const std::vector<std::string>& ids) {
  Outcome o;
  std::map<std::string, const ReproRow*> by_id;
  for (const auto& r : rows) by_id[r.id] = &r;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      o.require(false, id + " missing");
    } else {
      o.require(it->second->pass, id + " got " + format_number(it->second->got));
    }
  }
  return o;
}

Outcome properties() {
  Outcome o;

  // One-step exactness on random real-rooted quadratics.
  int quad_bad = 0;
  for (int i = 0; i < 200; ++i) {
    double a = oracle::uniform(0.5, 3.0) * (i % 2 ? 1 : -1);
    double r1 = oracle::uniform(-5, 5), r2 = oracle::uniform(-5, 5);
    double b = -a * (r1 + r2), c = a * r1 * r2;
    auto p = ScalarProblem::parse(format_number(a) + "*x^2+(" + format_number(b) + ")*x+(" +
                                  format_number(c) + ")");
    auto want = oracle::quadratic_roots(a, b, c);
    try {
      auto rep = step_candidates(p, oracle::uniform(-6, 6));
      for (const auto& root : rep.roots) {
        double d = std::min(std::fabs(root.candidate - want[0]), std::fabs(root.candidate - want[1]));
        if (d > 1e-10 * std::max(1.0, std::fabs(root.candidate))) ++quad_bad;
      }
    } catch (const Error&) {
      ++quad_bad;
    }
  }
  o.require(quad_bad == 0, std::to_string(quad_bad) + " quadratic roots off");

  // Symbolic gradient against central differences on the example objective.
  auto sp = example_system();
  int fd_bad = 0;
  for (int t = 0; t < 50; ++t) {
    Vector x{{oracle::uniform(-1, 1), oracle::uniform(-0.1, 0.1), oracle::uniform(-1, 1)}};
    Vector g = sp.gradient_at(x);
    for (int i = 0; i < 3; ++i) {
      std::vector<double> xp(x.data(), x.data() + 3), xm = xp;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      double fd = (oracle::example_objective(xp) - oracle::example_objective(xm)) / 2e-6;
      if (std::fabs(g(i) - fd) > 1e-4 * std::max(1.0, std::fabs(fd))) ++fd_bad;
    }
  }
  o.require(fd_bad == 0, std::to_string(fd_bad) + " gradient entries off");

  // Gamma reflection.
  int refl_bad = 0;
  for (int i = 0; i < 200; ++i) {
    double z = oracle::uniform(-6, 6);
    if (std::fabs(z - std::round(z)) < 1e-3) z += 0.01;
    double lhs = log_abs_gamma(z) + log_abs_gamma(1 - z);
    double rhs = std::log(std::numbers::pi / std::fabs(std::sin(std::numbers::pi * z)));
    if (std::fabs(lhs - rhs) > 1e-9) ++refl_bad;
  }
  o.require(refl_bad == 0, std::to_string(refl_bad) + " reflection failures");

  // RL quadrature on monomials.
  int rl_bad = 0;
  for (int m = 0; m <= 4; ++m) {
    auto f = parse_expression("x^" + std::to_string(m), {"x"});
    for (double beta : {0.25, 0.5, 1.0, 1.5, 2.75}) {
      for (double x0 : {0.5, 1.0, 3.0}) {
        double want = oracle::rl_monomial(m, x0, beta);
        double got = rl_integral_quadrature(f, 0.0, x0, beta);
        if (std::fabs(got - want) > 1e-7 * std::max(1.0, std::fabs(want))) ++rl_bad;
      }
    }
  }
  o.require(rl_bad == 0, std::to_string(rl_bad) + " quadrature mismatches");

  // Equal-step law on every system candidate.
  int law_bad = 0, candidates = 0;
  for (int t = 0; t < 200; ++t) {
    Vector x{{oracle::uniform(-1, 1), oracle::uniform(-0.1, 0.1), oracle::uniform(-1, 1)}};
    try {
      for (const auto& c : system_step_candidates(sp, x).candidates) {
        ++candidates;
        for (int i = 0; i < 3; ++i) law_bad += c.point(i) != x(i) + c.z;
      }
    } catch (const NoRealStepError&) {
    }
  }
  o.require(candidates > 0 && law_bad == 0, std::to_string(law_bad) + " equal-step violations");
  return o;
}

}  // namespace

int main() {
  const auto rows = repro_suite();
  std::vector<std::pair<std::string, Outcome>> results;

  results.emplace_back("quadratic: single step, exact roots, x0=5 rejected",
                       from_rows(rows, {"ex1.x0=0.5.rounded", "ex1.x0=0.5.exact",
                                        "ex1.x0=-3.5.rounded", "ex1.x0=-3.5.exact",
                                        "ex1.x0=5.admissible"}));
  results.emplace_back(
      "cubic: single step, iteration, double root, x0=3 discriminant",
      from_rows(rows, {"ex2.x0=2.5.|Z|", "ex2.x0=2.5.candidate", "ex2.iterate.root",
                       "ex2.iterate.steps", "ex2.x0=-2.candidate", "ex2.x0=3.discriminant",
                       "ex2.x0=3.admissible"}));
  results.emplace_back(
      "beta recovery on the 0.01 grid",
      from_rows(rows, {"ex3.root1.beta", "ex3.root2.beta", "ex4.beta", "ex4.x0=-2.found"}));
  results.emplace_back("fitted coefficients k1, k0",
                       from_rows(rows, {"ex3.root1.k1", "ex3.root1.k0", "ex3.root2.k1",
                                        "ex3.root2.k0", "ex4.k1", "ex4.k0"}));
  results.emplace_back("system objective values",
                       from_rows(rows, {"ex5.F(0)", "ex5.F(guess)", "ex5.candidate1.F",
                                        "ex5.candidate2.F", "ex5.hybrid.F"}));
  results.emplace_back("delta filter",
                       from_rows(rows, {"ex5.delta(0)", "ex5.delta(1/2)", "ex5.delta(2/3)"}));
  results.emplace_back("gradient descent steps and iteration band",
                       from_rows(rows, {"gd.step(0)", "gd.F(step(0))", "gd.step(guess)",
                                        "gd.F(step(guess))", "gd.iterations"}));
  results.emplace_back("property suites", properties());

  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, o] = results[i];
    all = all && o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << name;
    if (!o.pass) std::cout << "  (" << o.detail << ")";
    std::cout << '\n';
  }
  return all ? 0 : 1;
}
