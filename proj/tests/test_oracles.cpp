// Reference values from tests/oracles/shooting_reference.py (adaptive
// high-order shooting, independent of the finite-difference solver).

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "kppopt/optimizer.hpp"

using namespace kppopt;

namespace {

struct Reference {
  const char* name;
  ResourceProfile m;
  double mu;
  double theta0;
  double integral;
  double theta1;
};

std::vector<Reference> references() {
  return {
      {"crenel(0.5)", ResourceProfile::crenel(0.5, 1.0), 0.05, 8.9432799107534e-01, 5.9051708853157e-01,
       2.9515521612356e-01},
      {"crenel(0.3)", ResourceProfile::crenel(0.3, 1.0), 0.05, 7.1637836990050e-01, 4.0347880475003e-01,
       2.0740069129470e-01},
      {"crenel(0.4)", ResourceProfile::crenel(0.4, 1.0), 0.25, 5.5871322053224e-01, 4.5634203870753e-01,
       3.7080104959243e-01},
      {"two-step", testing::two_step(), 0.02, 3.9094358250864e-01, 5.3639863977312e-01,
       3.8172379821658e-01},
  };
}

}  // namespace

TEST_CASE("state matches the shooting reference at n = 4096") {
  const Grid g = make_grid(4096);
  for (const auto& r : references()) {
    INFO(r.name);
    const StateSolution st = solve_state(r.m, r.mu, g);
    CHECK(std::abs(integrate(st.theta) - r.integral) <= 1e-7);
    CHECK(std::abs(st.theta[0] - r.theta0) <= 1e-6);
    CHECK(std::abs(st.theta[g.n()] - r.theta1) <= 1e-6);
  }
}

TEST_CASE("Richardson extrapolation from n = 2^15, 2^16") {
  const auto m = ResourceProfile::crenel(0.5, 1.0);
  auto I = [&](int n) { return integrate(solve_state(m, 0.05, make_grid(n)).theta); };
  const double rich = (4 * I(1 << 16) - I(1 << 15)) / 3;
  CHECK(std::abs(rich - 5.9051708853157e-01) <= 1e-10);
  CHECK(std::abs(I(1 << 12) - rich) <= 1e-7);
}

TEST_CASE("objective oracle for the dilation case") {
  // F = integral - c * mass with the shooting integral.
  const double F = 4.0347880475003e-01 - 2.0 * 0.3;
  CHECK(std::abs(objective(ResourceProfile::crenel(0.3, 1.0), 0.05, 2.0, make_grid(1 << 13)) - F) <= 1e-8);
}
