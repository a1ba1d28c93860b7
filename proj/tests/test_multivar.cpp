#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracstep/multivar.hpp"
#include "fracstep/repro.hpp"
#include "oracles.hpp"

using namespace fracstep;

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector random_point() {
  return Vector{{oracle::uniform(-1, 1), oracle::uniform(-0.1, 0.1), oracle::uniform(-1, 1)}};
}

double fd_partial(const Vector& x, int i, double h = 1e-6) {
  auto xp = to_std(x), xm = to_std(x);
  xp[i] += h;
  xm[i] -= h;
  return (oracle::example_objective(xp) - oracle::example_objective(xm)) / (2 * h);
}

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace

TEST_CASE("objective matches the hand-coded system") {
  auto sp = example_system();
  for (int i = 0; i < 20; ++i) {
    Vector x = random_point();
    CHECK(sp.objective_at(x) == doctest::Approx(oracle::example_objective(to_std(x))));
    auto g = oracle::example_residuals(to_std(x));
    Vector r = sp.residuals_at(x);
    for (int k = 0; k < 3; ++k) CHECK(r(k) == doctest::Approx(g[k]));
  }
}

TEST_CASE("symbolic gradient and Hessian agree with finite differences") {
  auto sp = example_system();
  for (int t = 0; t < 50; ++t) {
    Vector x = random_point();
    Vector g = sp.gradient_at(x);
    Matrix h = sp.hessian_at(x);
    for (int i = 0; i < 3; ++i) {
      CAPTURE(i);
      CHECK(rel_err(g(i), fd_partial(x, i)) <= 1e-4);
      CHECK(rel_err(g(i), oracle::example_gradient(to_std(x))[i]) <= 1e-12);
      for (int j = 0; j < 3; ++j) {
        auto gi = [&](double t) {
          auto p = to_std(x);
          p[j] += t;
          return oracle::example_gradient(p)[i];
        };
        double fd = oracle::derivative(gi, 0.0, 1e-4);
        CAPTURE(j);
        CHECK(rel_err(h(i, j), fd) <= 1e-4);
      }
    }
  }
}

TEST_CASE("Hessian is symmetric and the directional sums match") {
  auto sp = example_system();
  Vector x = random_point();
  Matrix h = sp.hessian_at(x);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(directional_first(sp, x) == doctest::Approx(sp.gradient_at(x).sum()));
  CHECK(directional_second(sp, x) == doctest::Approx(h.sum()));
  // d/dZ F(x + Z 1) at Z = 0
  auto along = [&](double z) { return sp.objective_at(x + z * Vector::Ones(3)); };
  CHECK(rel_err(directional_first(sp, x), oracle::derivative(along, 0.0, 1e-5)) <= 1e-6);
  CHECK(rel_err(directional_second(sp, x), oracle::second_derivative(along, 0.0, 1e-3)) <= 1e-4);
}

TEST_CASE("Jacobian agrees with finite differences") {
  auto sp = example_system();
  Vector x = random_point();
  Matrix j = jacobian_eval(sp, x);
  for (int i = 0; i < 3; ++i) {
    auto xp = to_std(x), xm = to_std(x);
    xp[i] += 1e-6;
    xm[i] -= 1e-6;
    auto gp = oracle::example_residuals(xp), gm = oracle::example_residuals(xm);
    for (int k = 0; k < 3; ++k) CHECK(rel_err(j(k, i), (gp[k] - gm[k]) / 2e-6) <= 1e-6);
  }
}

TEST_CASE("equal-step law holds on every candidate") {
  auto sp = example_system();
  int seen = 0;
  for (int t = 0; t < 200; ++t) {
    Vector x = random_point();
    SystemStepReport rep;
    try {
      rep = system_step_candidates(sp, x);
    } catch (const NoRealStepError& e) {
      CHECK(e.discriminant() < 0.0);
      continue;
    }
    for (const auto& c : rep.candidates) {
      ++seen;
      for (int i = 0; i < 3; ++i) CHECK(c.point(i) == x(i) + c.z);
      CHECK(c.admissible == (std::fabs(c.z) < 1.0));
      double resid = rep.d2f * c.z * c.z + 2 * rep.df * c.z + 2 * rep.objective;
      CHECK(std::fabs(resid) <= 1e-9 * (std::fabs(rep.objective) + std::fabs(rep.df) + 1));
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("delta matches its definition at the guess") {
  auto sp = example_system();
  Vector x{{2.0 / 3.0, 0.0032, -0.523}};
  auto rep = system_step_candidates(sp, x);
  CHECK(rep.delta == doctest::Approx(rep.df * rep.df - 2 * rep.objective * rep.d2f));
  REQUIRE(rep.candidates.size() == 2);
  CHECK(rep.candidates[0].z == doctest::Approx(-0.036476).epsilon(1e-4));
  CHECK(rep.candidates[1].z == doctest::Approx(0.040958).epsilon(1e-4));
}

TEST_CASE("coordinate mixing") {
  Vector a{{1, 2, 3}}, b{{10, 20, 30}};
  CHECK(mix_coordinates(a, b, 0b000) == a);
  CHECK(mix_coordinates(a, b, 0b111) == b);
  CHECK(mix_coordinates(a, b, 0b010) == Vector{{1, 20, 3}});
}

TEST_CASE("hybrid choice is the minimum over all masks") {
  auto sp = example_system();
  Vector x{{2.0 / 3.0, 0.0032, -0.523}};
  auto rep = system_step_candidates(sp, x);
  auto h = best_hybrid(sp, rep, {0, 1});
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::uint32_t m = 1; m < 8; ++m) {
      CHECK(h.objective <= sp.objective_at(mix_coordinates(x, rep.candidates[c].point, m)));
    }
  }
  CHECK(h.objective <= 0.35895 + 1e-5);
}

TEST_CASE("hybrid is limited in dimension") {
  std::vector<std::string> eqs;
  VariableList vars;
  for (int i = 0; i < 13; ++i) {
    vars.push_back("v" + std::to_string(i));
    eqs.push_back("v" + std::to_string(i) + "^2-1");
  }
  auto sp = SystemProblem::parse(eqs, vars);
  try {
    system_solve(sp, Vector::Constant(13, 0.5), 1e-8, 5, SystemStrategy::Hybrid);
    FAIL("expected DimensionTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionTooLarge);
  }
}

TEST_CASE("system solve converges on a separable system") {
  auto sp = SystemProblem::parse({"x-1", "y-1"}, {"x", "y"});
  auto t = system_solve(sp, Vector{{0.7, 0.7}}, 1e-20, 10, SystemStrategy::BestCandidate);
  CHECK(t.termination == Termination::Converged);
  CHECK(t.rows.back().x(0) == doctest::Approx(1.0));
}

TEST_CASE("system solve from the example guess stops on delta < 0") {
  auto sp = example_system();
  try {
    system_solve(sp, Vector{{2.0 / 3.0, 0.0032, -0.523}}, 1e-8, 20, SystemStrategy::BestCandidate);
    FAIL("expected a NoRealStep failure");
  } catch (const SystemSolveError& e) {
    CHECK(e.kind() == ErrorKind::NoRealStep);
    const auto& rows = e.trace().rows;
    REQUIRE(rows.size() >= 2);
    CHECK(rows.back().delta.value() < 0.0);
    CHECK(rows[1].objective < rows[0].objective);
  }
}

TEST_CASE("gradient descent step decreases F for small gamma") {
  auto sp = example_system();
  for (int t = 0; t < 50; ++t) {
    Vector x = random_point();
    Vector g = sp.gradient_at(x);
    if (g.norm() < 1e-8) continue;
    double gamma = 1e-4 / std::max(1.0, g.norm());
    CHECK(sp.objective_at(gd_step(sp, x, gamma)) < sp.objective_at(x));
  }
}

TEST_CASE("gd step equals x - gamma * gradient of F") {
  auto sp = example_system();
  Vector x = random_point();
  Vector want = x - 1e-3 * sp.gradient_at(x);
  CHECK((gd_step(sp, x, 1e-3) - want).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(gd_step(sp, x, 0.0) == x);
  CHECK_THROWS_AS(gd_step(sp, x, -1.0), Error);
}

TEST_CASE("gd run: monotone at the example step size, divergence detected") {
  auto sp = example_system();
  auto t = gd_run(sp, Vector::Zero(3), 1e-3, 0.43, 1000);
  CHECK(t.termination == Termination::Converged);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].objective <= t.rows[i - 1].objective);
  }
  try {
    gd_run(sp, Vector::Zero(3), 10.0, 1e-8, 1000);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::NonFinite || e.kind() == ErrorKind::Domain));
  }
}

TEST_CASE("dimension mismatch") {
  auto sp = example_system();
  CHECK_THROWS_AS(sp.objective_at(Vector::Zero(2)), Error);
  CHECK_THROWS_AS(jacobian_eval(sp, Vector::Zero(4)), Error);
}
