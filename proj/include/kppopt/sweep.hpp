#pragma once

#include <string>
#include <vector>

#include "kppopt/grid.hpp"
#include "kppopt/state.hpp"

namespace kppopt {

struct CrenelOptimum {
  double ell_star;
  double G_value;
};

/// sup over l of F_mu(crenel(l)): scan l = 0, 1/64, ..., 1, then golden
/// section in the bracket around the best scan point down to |dl| <= 1e-5.
/// The best evaluated point is returned; ties go to the smaller l.
CrenelOptimum maximize_over_crenels(double mu, double c, double kappa, const Grid& g,
                                    const SolverOptions& opts = {});

struct SweepRecord {
  double mu;
  double ell_star;
  double G_value;
  int grid_n;
  std::string status;  // "ok" or the failure message
  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  std::vector<SweepRecord> records;
  double G_max;
  double mu_bar_l;
  double mu_bar_r;
  double argmax_band_tol;
};

/// Applies the band rule to finished records: mu_bar_l (mu_bar_r) is the
/// smallest (largest) mu with G >= G_max - tol. A negative tol selects
/// 1e-6 * max(1, |G_max|).
SweepResult extract_band(std::vector<SweepRecord> records, double band_tol = -1.0);

/// Evaluates G on every mu of the grid. Each point runs on
/// resolved_grid_size(base_n, mu) intervals.
SweepResult sweep_G(const std::vector<double>& mu_grid, double c, double kappa, int base_n,
                    int jobs = 1, const SolverOptions& opts = {}, double band_tol = -1.0);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// Golden-section refinement of argmax G in log(mu) between the sweep
/// neighbours of the grid argmax.
CrenelOptimum refine_argmax(const SweepResult& sweep, double c, double kappa, int base_n,
                            double* mu_star, double rel_tol = 1e-3,
                            const SolverOptions& opts = {});

/// Coarse argmax of G on a log grid spanning [1e-5, 1] * kappa; used to size
/// the multistart seed family.
double estimate_mu_bar(double c, double kappa);

}  // namespace kppopt
