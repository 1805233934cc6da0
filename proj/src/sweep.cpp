#include "kppopt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "kppopt/errors.hpp"
#include "kppopt/optimizer.hpp"
#include "kppopt/parallel.hpp"

namespace kppopt {

namespace {

constexpr int kScanIntervals = 64;
constexpr double kEllTol = 1e-5;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

}  // namespace

CrenelOptimum maximize_over_crenels(double mu, double c, double kappa, const Grid& g,
                                    const SolverOptions& opts) {
  if (!(mu > 0.0)) throw InvalidInput("mu must be positive");
  CrenelOptimum best{0.0, -std::numeric_limits<double>::infinity()};
  auto eval = [&](double ell) {
    const double f = objective(ResourceProfile::crenel(ell, kappa), mu, c, g, opts);
    if (f > best.G_value || (f == best.G_value && ell < best.ell_star)) best = {ell, f};
    return f;
  };

  int best_index = 0;
  double best_scan = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScanIntervals; ++i) {
    const double f = eval(static_cast<double>(i) / kScanIntervals);
    if (f > best_scan) {
      best_scan = f;
      best_index = i;
    }
  }

  double a = static_cast<double>(std::max(0, best_index - 1)) / kScanIntervals;
  double b = static_cast<double>(std::min(kScanIntervals, best_index + 1)) / kScanIntervals;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > kEllTol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(x2);
    }
  }
  return best;
}

SweepResult extract_band(std::vector<SweepRecord> records, double band_tol) {
  std::optional<double> g_max;
  for (const auto& r : records) {
    if (r.ok() && (!g_max || r.G_value > *g_max)) g_max = r.G_value;
  }
  if (!g_max) throw Error("sweep produced no successful points");
  const double tol = band_tol >= 0.0 ? band_tol : 1e-6 * std::max(1.0, std::abs(*g_max));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : records) {
    if (r.ok() && r.G_value >= *g_max - tol) {
      lo = std::min(lo, r.mu);
      hi = std::max(hi, r.mu);
    }
  }
  return SweepResult{std::move(records), *g_max, lo, hi, tol};
}

SweepResult sweep_G(const std::vector<double>& mu_grid, double c, double kappa, int base_n,
                    int jobs, const SolverOptions& opts, double band_tol) {
  if (mu_grid.size() < 8) throw InvalidInput("sweep needs at least 8 mu values");
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!(mu_grid[i] > 0.0)) throw InvalidInput("mu grid must be positive");
    if (i > 0 && !(mu_grid[i] > mu_grid[i - 1])) throw InvalidInput("mu grid must be sorted");
  }
  std::vector<SweepRecord> records(mu_grid.size());
  const auto errors = parallel_for(mu_grid.size(), jobs, [&](std::size_t i) {
    const double mu = mu_grid[i];
    const int n = resolved_grid_size(base_n, mu);
    records[i] = SweepRecord{mu, std::nan(""), std::nan(""), n, "failed"};
    const CrenelOptimum best = maximize_over_crenels(mu, c, kappa, make_grid(n), opts);
    records[i] = SweepRecord{mu, best.ell_star, best.G_value, n, "ok"};
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      records[i].status = e.what();
    }
  }
  return extract_band(std::move(records), band_tol);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw InvalidInput("bad log grid specification");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

CrenelOptimum refine_argmax(const SweepResult& sweep, double c, double kappa, int base_n,
                            double* mu_star, double rel_tol, const SolverOptions& opts) {
  const auto& rec = sweep.records;
  std::size_t best = rec.size();
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (rec[i].ok() && rec[i].mu == sweep.mu_bar_l) best = i;
  }
  if (best == rec.size()) throw Error("sweep has no argmax record");
  const double lo = rec[best > 0 ? best - 1 : best].mu;
  const double hi = rec[best + 1 < rec.size() ? best + 1 : best].mu;
  const Grid g = make_grid(resolved_grid_size(base_n, lo));

  CrenelOptimum best_opt{rec[best].ell_star, -std::numeric_limits<double>::infinity()};
  double best_mu = rec[best].mu;
  auto eval = [&](double log_mu) {
    const double mu = std::exp(log_mu);
    const CrenelOptimum o = maximize_over_crenels(mu, c, kappa, g, opts);
    if (o.G_value > best_opt.G_value) {
      best_opt = o;
      best_mu = mu;
    }
    return o.G_value;
  };
  eval(std::log(rec[best].mu));
  double a = std::log(lo);
  double b = std::log(hi);
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > rel_tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(x2);
    }
  }
  if (mu_star != nullptr) *mu_star = best_mu;
  return best_opt;
}

double estimate_mu_bar(double c, double kappa) {
  const auto grid = log_grid(1e-5 * kappa, kappa, 16);
  double best_mu = grid.front();
  double best_g = -std::numeric_limits<double>::infinity();
  for (double mu : grid) {
    const Grid g = make_grid(resolved_grid_size(256, mu));
    const double v = maximize_over_crenels(mu, c, kappa, g).G_value;
    if (v > best_g) {
      best_g = v;
      best_mu = mu;
    }
  }
  return best_mu;
}

}  // namespace kppopt
