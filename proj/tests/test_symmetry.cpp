#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "kppopt/errors.hpp"
#include "kppopt/optimizer.hpp"
#include "kppopt/symmetry.hpp"

using namespace kppopt;

TEST_CASE("tiling basics") {
  const auto cr = ResourceProfile::crenel(0.3, 1.0);
  CHECK(tile_k_symmetric(cr, 1) == cr);
  CHECK_THROWS_AS(tile_k_symmetric(cr, 0), InvalidInput);

  const auto t2 = tile_k_symmetric(cr, 2);
  CHECK(t2.breakpoints() == std::vector<double>{0.0, 0.15, 0.85, 1.0});
  CHECK(t2.values() == std::vector<double>{1.0, 0.0, 1.0});

  const auto t4 = tile_k_symmetric(cr, 4);
  CHECK(jump_count(t4) == 4);
  CHECK(total_variation(t4) == 4.0);
  for (int k = 1; k <= 7; ++k) {
    CHECK(mass(tile_k_symmetric(cr, k)) == doctest::Approx(mass(cr)).epsilon(1e-15));
  }
}

TEST_CASE("tiling a pattern without boundary jumps multiplies TV by k") {
  const auto p = testing::two_step();
  for (int k = 1; k <= 6; ++k) {
    const auto t = tile_k_symmetric(p, k);
    CHECK(total_variation(t) == doctest::Approx(k * total_variation(p)).epsilon(1e-14));
    CHECK(mass(t) == doctest::Approx(mass(p)).epsilon(1e-14));
  }
}

TEST_CASE("cell 2l+1 carries the reflected pattern") {
  const auto p = testing::two_step();
  const auto t = tile_k_symmetric(p, 3);
  for (double y : {0.1, 0.3, 0.7, 0.9}) {
    CHECK(t(y / 3) == p(y));
    CHECK(t((1 + y) / 3) == p(1 - y));
    CHECK(t((2 + y) / 3) == p(y));
  }
}

TEST_CASE("dilation identity") {
  const Grid g = make_grid(1 << 12);
  const auto cr = ResourceProfile::crenel(0.3, 1.0);
  const auto same = dilation_identity_check(cr, 0.05, 1.0, 2.0, g);
  CHECK(same.lhs == same.rhs);
  const auto k = dilation_identity_check(ResourceProfile::constant(0.4, 1.0), 0.05, 2.0, 2.0, g);
  CHECK(k.lhs == doctest::Approx(-0.4).epsilon(1e-13));
  CHECK(k.rhs == doctest::Approx(-0.4).epsilon(1e-13));
  const auto d = dilation_identity_check(cr, 0.05, 2.0, 2.0, make_grid(1 << 13));
  CHECK(d.relative_mismatch() <= 1e-6);
  CHECK_THROWS_AS(dilation_identity_check(cr, 0.05, 0.0, 2.0, g), InvalidInput);
}

TEST_CASE("k-symmetric identity") {
  const auto cr = ResourceProfile::crenel(0.4, 1.0);
  const Grid g = make_grid(1 << 14);
  const auto one = ksym_identity_check(cr, 1, 0.01, 2.0, g);
  CHECK(one.lhs == one.rhs);
  const auto full = ksym_identity_check(ResourceProfile::constant(1.0, 1.0), 4, 0.01, 2.0, g);
  CHECK(full.lhs == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(full.rhs == doctest::Approx(-1.0).epsilon(1e-14));
  const auto k4 = ksym_identity_check(cr, 4, 1e-3, 2.0, g);
  CHECK(k4.mismatch() <= 2e-5 * (1 + std::abs(k4.rhs)));
  CHECK_THROWS_AS(ksym_identity_check(cr, 3, 0.01, 2.0, g), InvalidInput);
  CHECK_THROWS_AS(ksym_identity_check(cr, 8, 1e-6, 2.0, make_grid(256)), InvalidInput);
}

TEST_CASE("symmetry detection") {
  const auto t = tile_k_symmetric(ResourceProfile::crenel(0.3, 1.0), 4);
  const auto hit = detect_symmetry(t, 8, 1e-3);
  REQUIRE(hit.has_value());
  CHECK(hit->K == 4);
  CHECK(l1_distance(hit->pattern, ResourceProfile::crenel(0.3, 1.0).shape()) <= 1e-12);
  CHECK(hit->mismatch <= 1e-12);

  CHECK_FALSE(detect_symmetry(ResourceProfile::crenel(0.5, 1.0), 8, 1e-3).has_value());
  CHECK(detect_symmetry(ResourceProfile::constant(1.0, 1.0), 5, 1e-3)->K == 5);
}

TEST_CASE("fold measures the distance to the nearest tile") {
  const auto cr = ResourceProfile::crenel(0.5, 1.0);
  const auto f = fold(cr, 2);
  // Halves: kappa on [0, 1] and 0 after reflection; their mean is kappa / 2.
  CHECK(f.mismatch == doctest::Approx(0.5));
  CHECK(f.pattern(0.3) == 0.5);
  CHECK(fold(cr, 1).mismatch == 0.0);
}

TEST_CASE("distance to crenels") {
  CHECK(distance_to_crenel(ResourceProfile::crenel(0.3, 1.0).shape(), 1.0) == 0.0);
  CHECK(distance_to_crenel(ResourceProfile::crenel(0.3, 1.0).shape().reflected(), 1.0) == 0.0);
  const auto p = testing::two_step().shape();
  CHECK(distance_to_crenel(p, 1.0) > 0.1);
}
