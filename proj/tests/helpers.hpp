#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "kppopt/profile.hpp"

namespace kppopt::testing {

// Random piecewise-constant profile with `pieces` pieces and values in [0, kappa].
inline ResourceProfile random_profile(std::uint64_t seed, int pieces, double kappa = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> b{0.0};
  for (int j = 1; j < pieces; ++j) b.push_back(u(rng));
  std::sort(b.begin(), b.end());
  b.push_back(1.0);
  std::vector<double> v;
  for (int j = 0; j < pieces; ++j) v.push_back(kappa * u(rng));
  return ResourceProfile(std::move(b), std::move(v), kappa);
}

// Two-level profile 0 | kappa | 0.3 kappa used as a generic, asymmetric pattern.
inline ResourceProfile two_step(double kappa = 1.0) {
  return ResourceProfile({0.0, 0.2, 0.55, 1.0}, {0.0, kappa, 0.3 * kappa}, kappa);
}

}  // namespace kppopt::testing
