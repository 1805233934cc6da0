#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kppopt/adjoint.hpp"
#include "kppopt/grid.hpp"
#include "kppopt/profile.hpp"
#include "kppopt/state.hpp"

namespace kppopt {

struct OptimizerConfig {
  double mu = 0.0;
  double c = 2.0;
  double kappa = 1.0;
  int grid_n = 1024;
  int max_outer = 200;
  double tie_tol = 1e-9;
  double switch_fraction = 1.0;
  double m_tol = -1.0;  // negative: half a cell, i.e. stop only when nothing switches
  // Seeds for multistart. A non-positive guess is replaced by a coarse
  // estimate of the argmax of G.
  double mu_bar_guess = 0.0;
  int random_seeds = 2;
  std::uint64_t rng_seed = 1;
  int jobs = 1;
  SolverOptions solver;

  void validate() const;
};

struct OptimizerResult {
  ResourceProfile m_star;
  double F_value;
  int iterations;
  bool converged;
  bool zero_state;  // iterate reached m = 0, where the adjoint is undefined
  std::string stop_reason;
  double bang_bang_fraction;
  double hamiltonian_flatness;  // NaN for the zero state
  int jump_count;
  StateSolution theta;
  GridField phi;
  std::optional<AdjointSolution> adjoint;
  std::optional<SwitchingData> switching;
  // multistart bookkeeping
  int seed_index = -1;
  std::vector<std::string> seed_notes;
};

/// F_mu(m) = integral of theta - c * mass(m).
double objective(const ResourceProfile& m, double mu, double c, const Grid& g,
                 const SolverOptions& opts = {});
/// Objective on sampled resource values; the mass is the trapezoidal
/// integral of the samples, which equals the exact mass for cell averages.
double objective(const GridField& m, double mu, double c, const SolverOptions& opts = {});

/// Bathtub rule: kappa where phi - c > tie_tol, 0 where phi - c < -tie_tol,
/// previous cell value in between. Breakpoints land on cell boundaries.
ResourceProfile bathtub_update(const SwitchingData& sw, double kappa, double tie_tol);

/// (max H - min H) / (1 + max|H|) over nodes not adjacent to a jump of m.
double hamiltonian_flatness(const SwitchingData& sw);

OptimizerResult pontryagin_maximize(const OptimizerConfig& cfg, const ResourceProfile& m0);

/// Best result over the seeds by F_value; ties go to the earlier seed.
OptimizerResult multistart(const OptimizerConfig& cfg, const std::vector<ResourceProfile>& seeds);

/// Crenels l = 0.1..0.9, k-symmetric tiles of the best crenel at k^2 mu for
/// k = 1..ceil(2 sqrt(mu_bar / mu)), and cfg.random_seeds random bang-bang
/// profiles drawn from cfg.rng_seed.
std::vector<ResourceProfile> default_seeds(const OptimizerConfig& cfg);

/// Random bang-bang profile with 1..max_jumps jumps.
ResourceProfile random_bang_bang(std::uint64_t seed, double kappa, int max_jumps = 8);

/// Both sides of F_{B mu}(B m) = B F_mu(m). The left side lifts the bound
/// kappa to B kappa.
struct IdentitySides {
  double lhs;
  double rhs;
  double mismatch() const;           // |lhs - rhs|
  double relative_mismatch() const;  // |lhs - rhs| / max(|lhs|, |rhs|, tiny)
};
IdentitySides scaling_check_Bmu(const ResourceProfile& m, double mu, double B, double c,
                                const Grid& g, const SolverOptions& opts = {});

}  // namespace kppopt
