#pragma once

#include <vector>

#include "kppopt/optimizer.hpp"
#include "kppopt/profile.hpp"
#include "kppopt/state.hpp"

namespace kppopt {

/// Zeros of the discrete theta': {0, interior sign changes of theta', 1}.
/// Crossings are located by linear interpolation; crossings closer than 2h
/// (or within 2h of an end) are merged. Throws DegenerateState when theta'
/// is identically zero or stays below tol_deriv * max|theta'| for more than
/// ten consecutive cells.
std::vector<double> critical_points(const StateSolution& theta, double tol_deriv = 1e-8);

struct IntervalDecomposition {
  std::vector<double> a;  // a_0 = 0 < ... < a_{N+1} = 1
  std::vector<double> A;  // mean of theta - c m over each interval
  int i_star = 0;
  double delta = 0.0;
  double ell_local = 0.0;  // jump position inside the selected interval, in [0, 1]
  double F_total = 0.0;  // F_mu(m) from the same global state

  double weighted_sum() const;  // sum_i (a_{i+1} - a_i) A_i
};

/// Per-interval averages of theta - c m using the global state. Throws
/// StructureViolation when some interval does not hold exactly one jump.
IntervalDecomposition decompose(const ResourceProfile& m, const StateSolution& theta, double c,
                                const std::vector<double>& a);

struct QuasiMaximizerReport {
  IntervalDecomposition decomposition;
  int k_mu;
  double r_mu;
  double sigma_mu;
  PiecewiseConstant pattern;
  ResourceProfile m_hat;
  double F_hat;
  double F_bar;
  double gap_bound;  // 2 kappa delta
  double mu;
  double mu_over_delta_sq() const { return mu / (decomposition.delta * decomposition.delta); }
};

/// Selects the interval with the largest average, reflects and tiles its
/// pattern k_mu = floor(1/delta) times over [0, 1] and evaluates the result.
QuasiMaximizerReport build_quasi_maximizer(const OptimizerResult& m_bar, double c,
                                           const SolverOptions& opts = {});

}  // namespace kppopt
