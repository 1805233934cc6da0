#include <cmath>

#include "doctest.h"
#include "kppopt/errors.hpp"
#include "kppopt/optimizer.hpp"
#include "kppopt/sweep.hpp"
#include "kppopt/symmetry.hpp"

using namespace kppopt;

TEST_CASE("crenel maximization limits") {
  const Grid g = make_grid(512);
  const auto free = maximize_over_crenels(0.05, 0.0, 1.0, g);
  CHECK(free.ell_star == 1.0);
  CHECK(free.G_value == doctest::Approx(1.0).epsilon(1e-14));

  // Strong diffusion: theta is nearly the mean, so F ~ (1 - c) l <= 0.
  const auto flat = maximize_over_crenels(100.0, 2.0, 1.0, g);
  CHECK(flat.G_value >= 0.0);
  CHECK(flat.G_value <= 1e-6);
  CHECK(flat.ell_star <= 1e-3);
}

TEST_CASE("G near its argmax") {
  // Fine-grid values: G(1.3335e-3) = 5.55556e-3 at l* ~ 0.0198.
  const double mu = 1.3335214321633241e-3;
  const auto best = maximize_over_crenels(mu, 2.0, 1.0, make_grid(4096));
  CHECK(best.G_value > 0.0);
  CHECK(best.G_value == doctest::Approx(5.55556e-3).epsilon(1e-4));
  CHECK(best.ell_star == doctest::Approx(0.0198).epsilon(2e-2));
}

TEST_CASE("band extraction") {
  std::vector<SweepRecord> flat;
  for (int i = 0; i < 8; ++i) flat.push_back({0.1 * (i + 1), 0.2, 0.5, 64, "ok"});
  const auto all = extract_band(flat);
  CHECK(all.mu_bar_l == doctest::Approx(0.1));
  CHECK(all.mu_bar_r == doctest::Approx(0.8));
  CHECK(all.argmax_band_tol == 1e-6);

  std::vector<SweepRecord> peak = flat;
  peak[3].G_value = 0.7;
  peak[4].G_value = 0.7 - 5e-7;
  peak[6].status = "failed";
  peak[6].G_value = 9.0;  // ignored
  const auto b = extract_band(peak);
  CHECK(b.G_max == 0.7);
  CHECK(b.mu_bar_l == doctest::Approx(0.4));
  CHECK(b.mu_bar_r == doctest::Approx(0.5));
  const auto tight = extract_band(peak, 1e-8);
  CHECK(tight.mu_bar_r == doctest::Approx(0.4));
}

TEST_CASE("sweep input validation") {
  CHECK_THROWS_AS(sweep_G(log_grid(1e-2, 1.0, 5), 2.0, 1.0, 64), InvalidInput);
  auto unsorted = log_grid(1e-2, 1.0, 9);
  std::swap(unsorted[2], unsorted[3]);
  CHECK_THROWS_AS(sweep_G(unsorted, 2.0, 1.0, 64), InvalidInput);
  auto negative = log_grid(1e-2, 1.0, 9);
  negative[0] = -1.0;
  CHECK_THROWS_AS(sweep_G(negative, 2.0, 1.0, 64), InvalidInput);
}

TEST_CASE("log grid endpoints") {
  const auto g = log_grid(1e-3, 10.0, 33);
  CHECK(g.size() == 33);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 10.0);
  CHECK(g[8] == doctest::Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("sweep is deterministic across job counts") {
  const auto mus = log_grid(1e-2, 1.0, 9);
  const auto a = sweep_G(mus, 2.0, 1.0, 256, 1);
  const auto b = sweep_G(mus, 2.0, 1.0, 256, 3);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].G_value == b.records[i].G_value);
    CHECK(a.records[i].ell_star == b.records[i].ell_star);
    CHECK(a.records[i].grid_n == resolved_grid_size(256, mus[i]));
  }
  CHECK(a.mu_bar_l == b.mu_bar_l);
}

TEST_CASE("G at k^2 mu equals the tiled objective at mu") {
  const Grid g = make_grid(1 << 14);
  const double mu = 2.5e-3;
  const int k = 2;
  const auto best = maximize_over_crenels(k * k * mu, 2.0, 1.0, g);
  const double tiled = objective(tile_k_symmetric(ResourceProfile::crenel(best.ell_star, 1.0), k), mu, 2.0, g);
  CHECK(std::abs(tiled - best.G_value) <= 2e-5 * (1 + std::abs(best.G_value)));
}

TEST_CASE("argmax refinement stays inside the neighbouring grid cells") {
  const auto mus = log_grid(3e-4, 3e-2, 9);
  const auto sw = sweep_G(mus, 2.0, 1.0, 1024);
  double mu_star = 0.0;
  const auto best = refine_argmax(sw, 2.0, 1.0, 1024, &mu_star);
  CHECK(mu_star > 3e-4);
  CHECK(mu_star < 3e-2);
  CHECK(best.G_value >= sw.G_max - 1e-6);
  CHECK(mu_star == doctest::Approx(1.33e-3).epsilon(0.1));
}
