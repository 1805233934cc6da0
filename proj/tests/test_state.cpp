#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "kppopt/errors.hpp"
#include "kppopt/state.hpp"

using namespace kppopt;

TEST_CASE("constant resource gives constant state exactly") {
  const Grid g = make_grid(256);
  for (double a : {0.3, 1.0}) {
    for (double mu : {0.01, 1.0, 100.0}) {
      const StateSolution st = solve_state(ResourceProfile::constant(a, 1.0), mu, g);
      for (double v : st.theta.values()) CHECK(v == a);
      CHECK(st.residual_norm == 0.0);
    }
  }
}

TEST_CASE("zero resource gives the zero state") {
  const StateSolution st = solve_state(ResourceProfile::constant(0.0, 1.0), 0.1, make_grid(64));
  CHECK(st.theta.max_abs() == 0.0);
}

TEST_CASE("diffusivity must be positive") {
  const auto m = ResourceProfile::crenel(0.5, 1.0);
  CHECK_THROWS_AS(solve_state(m, 0.0, make_grid(64)), InvalidInput);
  CHECK_THROWS_AS(solve_state(m, -1.0, make_grid(64)), InvalidInput);
}

TEST_CASE("residual of a perturbed constant") {
  const Grid g = make_grid(64);
  const double mu = 0.1, eps = 1e-6;
  const auto m = ResourceProfile::constant(1.0, 1.0);
  CHECK(state_residual(GridField::constant(g, 1.0), m, mu) == 0.0);
  std::vector<double> t(g.size(), 1.0);
  t[20] += eps;
  const double h = g.h();
  CHECK(state_residual(GridField(g, t), m, mu) >= 2 * mu * eps / (h * h) - 2 * eps);
}

TEST_CASE("converged crenel state") {
  const Grid g = make_grid(4096);
  const auto m = ResourceProfile::crenel(0.5, 1.0);
  const StateSolution st = solve_state(m, 0.05, g);
  CHECK(st.method == SolveMethod::newton);
  CHECK(st.residual_norm <= st.tolerance);
  CHECK(st.tolerance == residual_tolerance(SolverOptions{}, g, 0.05, 1.0));
  CHECK(state_residual(st.theta, m, 0.05) == doctest::Approx(st.residual_norm));
  // Maximum principle and strict monotonicity.
  CHECK(st.theta.min() >= 0.0);
  CHECK(st.theta.max() <= 1.0);
  for (std::size_t i = 1; i < st.theta.size(); ++i) CHECK(st.theta[i] < st.theta[i - 1]);
}

TEST_CASE("residual tolerance is raised to the rounding floor on fine grids") {
  SolverOptions o;
  const Grid coarse = make_grid(64);
  CHECK(residual_tolerance(o, coarse, 0.05, 1.0) == o.tol_residual);
  const StateSolution c = solve_state(ResourceProfile::crenel(0.5, 1.0), 0.05, coarse);
  CHECK(c.residual_norm <= o.tol_residual);
  const Grid fine = make_grid(1 << 16);
  CHECK(residual_tolerance(o, fine, 0.05, 1.0) > o.tol_residual);
  const StateSolution st = solve_state(ResourceProfile::crenel(0.5, 1.0), 0.05, fine);
  CHECK(st.residual_norm <= st.tolerance);
}

TEST_CASE("monotone fallback agrees with Newton") {
  const Grid g = make_grid(512);
  const auto m = testing::random_profile(11, 5);
  SolverOptions mono;
  mono.force_monotone = true;
  const StateSolution a = solve_state(m, 0.02, g);
  const StateSolution b = solve_state(m, 0.02, g, mono);
  CHECK(b.method == SolveMethod::monotone);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.theta.size(); ++i) diff = std::max(diff, std::abs(a.theta[i] - b.theta[i]));
  CHECK(diff <= 1e-9);
}

TEST_CASE("iteration caps raise NonConvergence with the best iterate") {
  const Grid g = make_grid(512);
  SolverOptions o;
  o.force_monotone = true;
  o.max_monotone = 2;
  try {
    solve_state(ResourceProfile::crenel(0.5, 1.0), 0.01, g, o);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.best_iterate().size() == g.size());
    CHECK(e.residual() > o.tol_residual);
  }
}

TEST_CASE("Newton from an arbitrary positive start") {
  const Grid g = make_grid(1024);
  const auto m = ResourceProfile::crenel(0.4, 1.0);
  const GridField ms = sample_resource(m, g);
  const StateSolution ref = solve_state(m, 0.1, g);
  const StateSolution alt = solve_state_newton(ms, 0.1, GridField::constant(g, mass(m)));
  double diff = 0.0;
  for (std::size_t i = 0; i < ref.theta.size(); ++i) diff = std::max(diff, std::abs(ref.theta[i] - alt.theta[i]));
  CHECK(diff <= 1e-9);
}

TEST_CASE("neumann operator rows") {
  const Grid g = make_grid(16);
  const Tridiagonal a = neumann_operator(g, 1.0);
  const double s = 1.0 / (g.h() * g.h());
  CHECK(a.diag[0] == doctest::Approx(2 * s));
  CHECK(a.upper[0] == doctest::Approx(-2 * s));
  CHECK(a.diag[5] == doctest::Approx(2 * s));
  CHECK(a.lower[4] == doctest::Approx(-s));
  CHECK(a.lower.back() == doctest::Approx(-2 * s));
}

TEST_CASE("tridiagonal elimination") {
  Tridiagonal a(4);
  for (std::size_t i = 0; i < 4; ++i) {
    a.diag[i] = 4.0;
    if (i > 0) a.lower[i] = -1.0;
    if (i < 3) a.upper[i] = -1.0;
  }
  const std::vector<double> x{1.0, -2.0, 3.0, 0.5};
  const std::vector<double> b = a.apply(x);
  const std::vector<double> y = solve_tridiagonal(a, b);
  for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));

  Tridiagonal s(3);
  s.diag = {1.0, 1.0, 1.0};
  s.upper = {1.0, 1.0, 0.0};
  s.lower = {0.0, 1.0, 1.0};  // second pivot is 1 - 1 = 0
  CHECK_THROWS_AS(solve_tridiagonal(s, std::vector<double>{1.0, 1.0, 1.0}), SingularSystem);
}
