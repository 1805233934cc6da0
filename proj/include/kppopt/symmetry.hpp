#pragma once

#include <optional>
#include <vector>

#include "kppopt/optimizer.hpp"
#include "kppopt/profile.hpp"

namespace kppopt {

/// k-symmetric function with a pattern on [0, 1]: cell 2l of width 1/k
/// carries pattern(k x - 2l), cell 2l+1 the mirror image pattern(2l + 2 - k x).
PiecewiseConstant tile_k_symmetric(const PiecewiseConstant& pattern, int k);
ResourceProfile tile_k_symmetric(const ResourceProfile& pattern, int k);

/// F_mu(m) on (0,1) against lam * F_{mu/lam^2}(m(lam .)) on (0, 1/lam). The
/// right side is solved on a grid of [0, 1/lam] with the spacing of g
/// (rounded to a whole number of intervals).
IdentitySides dilation_identity_check(const ResourceProfile& m, double mu, double lam, double c,
                                      const Grid& g, const SolverOptions& opts = {});

/// F_mu(tile_k(pattern)) on g against F_{k^2 mu}(pattern) on g.
IdentitySides ksym_identity_check(const ResourceProfile& pattern, int k, double mu, double c,
                                  const Grid& g, const SolverOptions& opts = {});

struct SymmetryMatch {
  int K;
  PiecewiseConstant pattern;  // mean of the folded cells, on [0, 1]
  double mismatch;            // L1 distance between m and tile_K(pattern)
};

/// Folds m into K cells with alternating reflection for K = k_max down to 2
/// and returns the largest K whose L1 mismatch is <= tol * kappa.
std::optional<SymmetryMatch> detect_symmetry(const ResourceProfile& m, int k_max, double tol);

/// L1 mismatch of the K-fold; exposed for diagnostics.
SymmetryMatch fold(const ResourceProfile& m, int K);

/// L1 distance from a pattern to the nearest crenel of the same mass, in
/// either orientation.
double distance_to_crenel(const PiecewiseConstant& pattern, double kappa);

}  // namespace kppopt
