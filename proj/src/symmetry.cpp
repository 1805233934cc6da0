#include "kppopt/symmetry.hpp"

#include <cmath>

#include "kppopt/errors.hpp"

namespace kppopt {

PiecewiseConstant tile_k_symmetric(const PiecewiseConstant& pattern, int k) {
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (pattern.length() != 1.0) throw InvalidInput("pattern must live on [0, 1]");
  const PiecewiseConstant mirrored = pattern.reflected();
  std::vector<double> b{0.0};
  std::vector<double> v;
  for (int cell = 0; cell < k; ++cell) {
    const PiecewiseConstant& p = cell % 2 == 0 ? pattern : mirrored;
    const auto& pb = p.breakpoints();
    for (std::size_t j = 0; j < p.pieces(); ++j) {
      v.push_back(p.values()[j]);
      const bool cell_end = j + 1 == p.pieces();
      b.push_back(cell_end ? (cell + 1 == k ? 1.0 : static_cast<double>(cell + 1) / k)
                           : (cell + pb[j + 1]) / k);
    }
  }
  return PiecewiseConstant(std::move(b), std::move(v));
}

ResourceProfile tile_k_symmetric(const ResourceProfile& pattern, int k) {
  return ResourceProfile(tile_k_symmetric(pattern.shape(), k), pattern.kappa());
}

IdentitySides dilation_identity_check(const ResourceProfile& m, double mu, double lam, double c,
                                      const Grid& g, const SolverOptions& opts) {
  if (!(lam > 0.0)) throw InvalidInput("lambda must be positive");
  const double lhs = objective(m, mu, c, g, opts);
  // m(lam x) on (0, 1/lam), same spacing as g.
  const PiecewiseConstant stretched = m.shape().transformed(1.0 / lam, 1.0);
  const int n_rhs = std::max(Grid::kMinIntervals, static_cast<int>(std::lround(g.n() / lam)));
  const Grid small(n_rhs, stretched.length());
  const GridField sampled = sample(stretched, small);
  const StateSolution st = solve_state(sampled, mu / (lam * lam), opts);
  const double f_small = integrate(st.theta) - c * stretched.integral();
  return {lhs, lam * f_small};
}

IdentitySides ksym_identity_check(const ResourceProfile& pattern, int k, double mu, double c,
                                  const Grid& g, const SolverOptions& opts) {
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (g.n() % k != 0) throw InvalidInput("grid intervals must be divisible by k");
  const double needed = std::ceil(10.0 / std::sqrt(static_cast<double>(k) * k * mu));
  if (g.n() / k < needed) throw InvalidInput("grid does not resolve the tiled cells");
  const double lhs = objective(tile_k_symmetric(pattern, k), mu, c, g, opts);
  const double rhs = objective(pattern, static_cast<double>(k) * k * mu, c, g, opts);
  return {lhs, rhs};
}

SymmetryMatch fold(const ResourceProfile& m, int K) {
  if (K < 1) throw InvalidInput("K must be at least 1");
  if (m.length() != 1.0) throw InvalidInput("profile must live on [0, 1]");
  std::vector<PiecewiseConstant> cells;
  cells.reserve(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) {
    const double lo = static_cast<double>(j) / K;
    const double hi = j + 1 == K ? 1.0 : static_cast<double>(j + 1) / K;
    PiecewiseConstant cell = m.shape().restricted(lo, hi);
    cells.push_back(j % 2 == 0 ? std::move(cell) : cell.reflected());
  }
  PiecewiseConstant pattern = pointwise_mean(cells);
  double mismatch = 0.0;
  for (const auto& cell : cells) mismatch += l1_distance(cell, pattern);
  return SymmetryMatch{K, std::move(pattern), mismatch / K};
}

std::optional<SymmetryMatch> detect_symmetry(const ResourceProfile& m, int k_max, double tol) {
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
  for (int K = k_max; K >= 2; --K) {
    SymmetryMatch f = fold(m, K);
    if (f.mismatch <= tol * m.kappa()) return f;
  }
  return std::nullopt;
}

double distance_to_crenel(const PiecewiseConstant& pattern, double kappa) {
  const double ell = std::clamp(pattern.integral() / kappa, 0.0, 1.0);
  const PiecewiseConstant cr = ResourceProfile::crenel(ell, kappa).shape();
  return std::min(l1_distance(pattern, cr), l1_distance(pattern, cr.reflected()));
}

}  // namespace kppopt
