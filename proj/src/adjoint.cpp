#include "kppopt/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "kppopt/errors.hpp"

namespace kppopt {

namespace {

Tridiagonal adjoint_operator(const StateSolution& s) {
  Tridiagonal a = neumann_operator(s.theta.grid(), s.mu);
  const auto& t = s.theta.values();
  const auto& m = s.m.values();
  for (std::size_t i = 0; i < a.size(); ++i) a.diag[i] += 2.0 * t[i] - m[i];
  return a;
}

}  // namespace

AdjointSolution solve_adjoint(const ResourceProfile& m, const StateSolution& theta, double mu,
                              const Grid& g) {
  if (!(theta.theta.grid() == g)) throw InvalidInput("state was solved on a different grid");
  if (mu != theta.mu) throw InvalidInput("state was solved for a different mu");
  const GridField sampled = sample_resource(m, g);
  const double res = state_residual(theta.theta, sampled, mu);
  if (res > 1e3 * std::max(theta.tolerance, 1e-11)) {
    throw InvalidInput("state does not solve the state equation for this resource");
  }
  StateSolution consistent = theta;
  consistent.m = sampled;
  return solve_adjoint(consistent);
}

AdjointSolution solve_adjoint(const StateSolution& theta) {
  if (theta.theta.max_abs() == 0.0) {
    throw SingularSystem("zero state: -mu p'' = 1 with Neumann conditions has no solution");
  }
  const Tridiagonal a = adjoint_operator(theta);
  const std::vector<double> ones(a.size(), 1.0);
  std::vector<double> p = solve_tridiagonal(a, ones, 1e-13);
  const double min_p = *std::min_element(p.begin(), p.end());
  AdjointSolution sol{GridField(theta.theta.grid(), std::move(p)), theta.mu, 0.0, min_p};
  sol.residual_norm = adjoint_residual(sol, theta);
  return sol;
}

double adjoint_residual(const AdjointSolution& p, const StateSolution& theta) {
  const Tridiagonal a = adjoint_operator(theta);
  const auto ap = a.apply(p.p.values());
  double r = 0.0;
  for (double v : ap) r = std::max(r, std::abs(v - 1.0));
  return r;
}

SwitchingData switching(const StateSolution& theta, const AdjointSolution& p, double c) {
  const Grid& g = theta.theta.grid();
  if (!(p.p.grid() == g)) throw InvalidInput("state and adjoint grids differ");
  const auto& t = theta.theta.values();
  const auto& pv = p.p.values();
  const auto& m = theta.m.values();
  const auto dt = derivative(theta.theta);
  const auto dp = derivative(p.p);
  std::vector<double> phi(t.size()), grad(t.size()), ham(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    phi[i] = pv[i] * t[i];
    grad[i] = phi[i] - c;
    ham[i] = theta.mu * dp[i] * dt[i] + phi[i] * (m[i] - t[i]) + t[i] - c * m[i];
  }
  return SwitchingData{theta.m, GridField(g, std::move(phi)), GridField(g, std::move(grad)),
                       GridField(g, std::move(ham)), c};
}

GridField gateaux_gradient(const SwitchingData& sw) { return sw.gradient; }

}  // namespace kppopt
