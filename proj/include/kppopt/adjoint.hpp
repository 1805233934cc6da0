#pragma once

#include "kppopt/grid.hpp"
#include "kppopt/profile.hpp"
#include "kppopt/state.hpp"

namespace kppopt {

/// Solution of -mu p'' - (m - 2 theta) p = 1, p'(0) = p'(1) = 0.
struct AdjointSolution {
  GridField p;
  double mu;
  double residual_norm;
  double min_value;  // positivity is reported, not enforced
  bool positive() const { return min_value > -1e-12; }
};

struct SwitchingData {
  GridField m;            // sampled resource, used for tie cells
  GridField phi;          // p * theta
  GridField gradient;     // phi - c
  GridField hamiltonian;  // mu p' theta' + p theta (m - theta) + theta - c m
  double c;
};

AdjointSolution solve_adjoint(const ResourceProfile& m, const StateSolution& theta, double mu,
                              const Grid& g);
/// Same on the sampled resource carried by the state.
AdjointSolution solve_adjoint(const StateSolution& theta);

double adjoint_residual(const AdjointSolution& p, const StateSolution& theta);

SwitchingData switching(const StateSolution& theta, const AdjointSolution& p, double c);

/// L2 gradient of F_mu at m: dF(m)[h] = integral of (phi - c) h.
GridField gateaux_gradient(const SwitchingData& sw);

}  // namespace kppopt
