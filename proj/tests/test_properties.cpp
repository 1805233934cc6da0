// Randomized invariants over many inputs.

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "kppopt/optimizer.hpp"
#include "kppopt/quasi.hpp"
#include "kppopt/symmetry.hpp"
#include "kppopt/verify.hpp"

using namespace kppopt;
using testing::random_profile;

TEST_CASE("sampling then integrating preserves mass") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const auto m = random_profile(rng(), 1 + static_cast<int>(rng() % 12), 0.5 + (rng() % 4));
    const Grid g = make_grid(16 + static_cast<int>(rng() % 3000));
    const double exact = mass(m);
    CHECK(std::abs(integrate(sample_resource(m, g)) - exact) <=
          10 * std::numeric_limits<double>::epsilon() * exact);
  }
}

TEST_CASE("total variation is reflection invariant") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto m = random_profile(s, 1 + static_cast<int>(s % 9));
    CHECK(m.shape().reflected().total_variation() == doctest::Approx(total_variation(m)).epsilon(1e-14));
    CHECK(m.shape().reflected().integral() == doctest::Approx(mass(m)).epsilon(1e-14));
  }
}

TEST_CASE("bang-bang total variation is kappa times jumps") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto m = random_bang_bang(s, 1.5);
    CHECK(total_variation(m) == doctest::Approx(1.5 * jump_count(m)));
  }
}

TEST_CASE("trapezoid refinement is second order for smooth integrands") {
  auto I = [](int n) {
    const Grid g = make_grid(n);
    std::vector<double> v;
    for (double x : g.nodes()) v.push_back(std::exp(std::sin(3 * x)));
    return integrate(GridField(g, v));
  };
  const double r = (I(64) - I(128)) / (I(128) - I(256));
  CHECK(r == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("state solve converges at second order") {
  const auto m = ResourceProfile::crenel(0.5, 1.0);  // jump on a node of every grid below
  auto I = [&](int n) { return integrate(solve_state(m, 0.05, make_grid(n)).theta); };
  const double r = (I(256) - I(512)) / (I(512) - I(1024));
  CHECK(r == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("monotone iterates descend from the supersolution") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Grid g = make_grid(256);
    const auto m = random_profile(s, 4);
    const GridField ms = sample_resource(m, g);
    const double mu = 0.01 * (1 + s);
    GridField theta = GridField::constant(g, 1.0);
    for (int k = 0; k < 60; ++k) {
      GridField next(g, monotone_step(theta, ms, mu, 1.0));
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(next[i] <= theta[i] + 1e-12);
      theta = next;
    }
  }
}

TEST_CASE("Newton from kappa and from the mean reach the same state") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Grid g = make_grid(512);
    const auto m = random_profile(100 + s, 6);
    const double mu = 0.005 * (1 + s);
    const StateSolution a = solve_state(m, mu, g);
    try {
      const StateSolution b = solve_state_newton(sample_resource(m, g), mu, GridField::constant(g, mass(m)));
      double diff = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) diff = std::max(diff, std::abs(a.theta[i] - b.theta[i]));
      CHECK(diff <= 1e-9);
    } catch (const std::exception&) {
      // The probe only compares runs that both converge.
    }
  }
}

TEST_CASE("comparison principle on nested crenels") {
  const Grid g = make_grid(1024);
  for (double mu : {0.001, 0.02, 0.5}) {
    GridField prev = GridField::constant(g, 0.0);
    for (double ell : {0.1, 0.25, 0.4, 0.7, 1.0}) {
      const StateSolution st = solve_state(ResourceProfile::crenel(ell, 1.0), mu, g);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(st.theta[i] >= prev[i] - 1e-10);
      prev = st.theta;
    }
  }
}

TEST_CASE("maximum principle on random profiles") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto m = random_profile(500 + s, 7, 2.0);
    const StateSolution st = solve_state(m, 0.001 + 0.01 * s, make_grid(1024));
    CHECK(st.theta.min() >= 0.0);
    CHECK(st.theta.max() <= m.shape().max() * (1 + 1e-10));
    CHECK(st.residual_norm <= st.tolerance);
  }
}

TEST_CASE("k-symmetric identity across k, patterns and diffusivities") {
  const Grid g = make_grid(3 << 12);  // divisible by 1, 2, 3, 4, 6, 8
  const std::vector<ResourceProfile> patterns{ResourceProfile::crenel(0.25, 1.0),
                                              ResourceProfile::crenel(0.5, 1.0), testing::two_step()};
  for (const auto& p : patterns) {
    for (int k : {1, 2, 3, 4, 6, 8}) {
      for (double k2mu : {0.05, 0.5, 5.0}) {
        const auto s = ksym_identity_check(p, k, k2mu / (k * k), 2.0, g);
        INFO("k=" << k << " k2mu=" << k2mu);
        CHECK(s.mismatch() <= 2e-5 * (1 + std::abs(s.rhs)));
      }
    }
  }
}

TEST_CASE("tiling round trip for generic patterns") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = random_profile(900 + s, 2 + static_cast<int>(s % 5));
    for (int k = 1; k <= 6; ++k) {
      const auto t = tile_k_symmetric(p, k);
      const auto hit = detect_symmetry(t, 8, 1e-6);
      if (k == 1) {
        CHECK_FALSE(hit.has_value());
      } else {
        REQUIRE(hit.has_value());
        CHECK(hit->K == k);
        CHECK(l1_distance(hit->pattern, p.shape()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("ascent and fixed-point consistency from random seeds") {
  OptimizerConfig cfg;
  cfg.mu = 0.005;
  cfg.grid_n = 1024;
  const Grid g = make_grid(cfg.grid_n);
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto seed = random_bang_bang(s, 1.0);
    const auto r = pontryagin_maximize(cfg, seed);
    CHECK(r.F_value >= objective(seed, cfg.mu, cfg.c, g) - 1e-13);
    CHECK(r.F_value == doctest::Approx(objective(r.m_star, cfg.mu, cfg.c, g)).epsilon(1e-12));
    if (r.converged && r.switching) {
      const auto again = bathtub_update(*r.switching, cfg.kappa, cfg.tie_tol);
      CHECK(l1_distance(again.shape(), r.m_star.shape()) <= 2 * g.h() * std::max(1, r.jump_count));
    }
  }
}

TEST_CASE("sandwich and decomposition on converged small-mu runs") {
  for (double mu : {2e-3, 5e-4}) {
    OptimizerConfig cfg;
    cfg.mu = mu;
    cfg.grid_n = 4096;
    cfg.mu_bar_guess = 1.3335e-3;
    const auto r = multistart(cfg, default_seeds(cfg));
    REQUIRE(r.converged);
    const auto q = build_quasi_maximizer(r, cfg.c);
    const auto& d = q.decomposition;
    CHECK(std::abs(d.weighted_sum() - d.F_total) <= 1e-9);
    CHECK(d.F_total <= d.A[d.i_star] + 1e-9);
    CHECK(q.F_hat >= q.F_bar - q.gap_bound - 1e-6);
    CHECK(q.F_hat <= q.F_bar + 1e-6);
  }
}

TEST_CASE("mu-derivative and perturbation bounds on random samples") {
  for (std::uint64_t seed : {1u, 7u, 13u}) {
    VerifyOptions o;
    o.rng_seed = seed;
    for (const auto& c : check_mu_derivative_bound(o)) CHECK(c.pass);
    for (const auto& c : check_mu_perturbation(o)) CHECK(c.pass);
  }
}
