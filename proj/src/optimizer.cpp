#include "kppopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include "kppopt/errors.hpp"
#include "kppopt/parallel.hpp"
#include "kppopt/sweep.hpp"
#include "kppopt/symmetry.hpp"

namespace kppopt {

namespace {

constexpr double kAscentSlack = 1e-13;

bool all_zero(const std::vector<double>& u) {
  return std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; });
}

std::size_t hash_cells(const std::vector<double>& u) {
  std::size_t h = u.size();
  for (double v : u) h ^= std::hash<double>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// A cell sits next to a jump of the cell values.
bool next_to_jump(const std::vector<double>& u, std::size_t i) {
  return (i > 0 && u[i - 1] != u[i]) || (i + 1 < u.size() && u[i + 1] != u[i]);
}

// Cell values -> exact profile. A fractional cell between a kappa cell and a
// 0 cell becomes a jump inside that cell placed so the cell average is kept;
// the sampled resource, and hence the discrete state, is unchanged.
ResourceProfile subcell_profile(const Grid& g, const std::vector<double>& u, double kappa) {
  std::vector<double> b{0.0};
  std::vector<double> v;
  auto push = [&](double hi, double value) {
    if (hi <= b.back()) return;
    b.push_back(hi);
    v.push_back(value);
  };
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int ii = static_cast<int>(i);
    const double lo = g.cell_lo(ii), hi = g.cell_hi(ii);
    const double t = std::clamp(u[i], 0.0, kappa);
    const bool fractional = t > 0.0 && t < kappa;
    const double left = i > 0 ? u[i - 1] : (i + 1 < n ? kappa - u[i + 1] : t);
    const double right = i + 1 < n ? u[i + 1] : (i > 0 ? kappa - u[i - 1] : t);
    if (fractional && left == kappa && right == 0.0) {
      push(lo + (t / kappa) * (hi - lo), kappa);
      push(hi, 0.0);
    } else if (fractional && left == 0.0 && right == kappa) {
      push(hi - (t / kappa) * (hi - lo), 0.0);
      push(hi, kappa);
    } else {
      push(hi, t);
    }
  }
  return ResourceProfile(PiecewiseConstant(std::move(b), std::move(v)), kappa);
}

struct Evaluation {
  double F;
  StateSolution state;
};

Evaluation evaluate(const GridField& m, const OptimizerConfig& cfg) {
  StateSolution st = solve_state(m, cfg.mu, cfg.solver);
  return {integrate(st.theta) - cfg.c * integrate(m), std::move(st)};
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("mu must be positive");
  if (!std::isfinite(c)) throw InvalidInput("c must be finite");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidInput("kappa must be positive");
  if (grid_n < Grid::kMinIntervals) throw InvalidInput("grid_n must be at least 16");
  if (max_outer < 1) throw InvalidInput("max_outer must be at least 1");
  if (!(tie_tol > 0.0)) throw InvalidInput("tie_tol must be positive");
  if (!(switch_fraction > 0.0 && switch_fraction <= 1.0)) {
    throw InvalidInput("switch_fraction must lie in (0, 1]");
  }
}

double objective(const ResourceProfile& m, double mu, double c, const Grid& g,
                 const SolverOptions& opts) {
  const StateSolution st = solve_state(m, mu, g, opts);
  return integrate(st.theta) - c * mass(m);
}

double objective(const GridField& m, double mu, double c, const SolverOptions& opts) {
  const StateSolution st = solve_state(m, mu, opts);
  return integrate(st.theta) - c * integrate(m);
}

ResourceProfile bathtub_update(const SwitchingData& sw, double kappa, double tie_tol) {
  const auto& g = sw.gradient.values();
  std::vector<double> cells = sw.m.values();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (g[i] > tie_tol) {
      cells[i] = kappa;
    } else if (g[i] < -tie_tol) {
      cells[i] = 0.0;
    }
  }
  return ResourceProfile::from_cells(sw.m.grid(), cells, kappa);
}

double hamiltonian_flatness(const SwitchingData& sw) {
  const auto& h = sw.hamiltonian.values();
  const auto& m = sw.m.values();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (next_to_jump(m, i)) continue;
    lo = std::min(lo, h[i]);
    hi = std::max(hi, h[i]);
    max_abs = std::max(max_abs, std::abs(h[i]));
  }
  if (lo > hi) return 0.0;
  return (hi - lo) / (1.0 + max_abs);
}

OptimizerResult pontryagin_maximize(const OptimizerConfig& cfg, const ResourceProfile& m0) {
  cfg.validate();
  if (std::abs(m0.kappa() - cfg.kappa) > 1e-15 * cfg.kappa) {
    throw InvalidInput("seed profile uses a different kappa");
  }
  const Grid g = make_grid(cfg.grid_n);
  const double m_tol = cfg.m_tol > 0.0 ? cfg.m_tol : 0.5 * g.h();

  std::vector<double> u = sample_resource(m0, g).values();
  Evaluation current = evaluate(GridField(g, u), cfg);
  std::unordered_set<std::size_t> visited{hash_cells(u)};

  int iterations = 0;
  bool converged = false;
  std::string reason = "max_outer reached";

  // Iterates that become m = 0 stop: the state vanishes and Phi is undefined.
  while (!all_zero(u) && iterations < cfg.max_outer) {
    const AdjointSolution adj = solve_adjoint(current.state);
    const SwitchingData sw = switching(current.state, adj, cfg.c);
    const auto& grad = sw.gradient.values();

    std::vector<std::size_t> mismatched;
    double measure = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double target = grad[i] > cfg.tie_tol ? cfg.kappa
                            : grad[i] < -cfg.tie_tol ? 0.0
                                                     : u[i];
      if (target != u[i]) {
        mismatched.push_back(i);
        measure += g.cell_width(static_cast<int>(i));
      }
    }
    if (measure < m_tol) {
      converged = true;
      reason = "bathtub fixed point";
      break;
    }
    std::stable_sort(mismatched.begin(), mismatched.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(grad[a]) > std::abs(grad[b]);
    });

    double fraction = cfg.switch_fraction;
    std::optional<std::vector<double>> accepted;
    std::optional<Evaluation> accepted_eval;
    for (;;) {
      const auto count = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(mismatched.size()))));
      std::vector<double> trial = u;
      for (std::size_t j = 0; j < count; ++j) {
        const std::size_t i = mismatched[j];
        trial[i] = grad[i] > 0.0 ? cfg.kappa : 0.0;
      }
      Evaluation e = evaluate(GridField(g, trial), cfg);
      if (e.F >= current.F - kAscentSlack) {
        accepted = std::move(trial);
        accepted_eval = std::move(e);
        break;
      }
      if (count == 1) break;
      fraction *= 0.5;
    }
    if (!accepted) {
      reason = "retraction underflow";
      converged = std::all_of(mismatched.begin(), mismatched.end(),
                              [&](std::size_t i) { return next_to_jump(u, i); });
      break;
    }
    ++iterations;
    if (!visited.insert(hash_cells(*accepted)).second) {
      // Revisited state: keep the better of the two and stop.
      if (accepted_eval->F > current.F) {
        u = std::move(*accepted);
        current = std::move(*accepted_eval);
      }
      reason = "cycle detected";
      converged = std::all_of(mismatched.begin(), mismatched.end(),
                              [&](std::size_t i) { return next_to_jump(u, i); });
      break;
    }
    u = std::move(*accepted);
    current = std::move(*accepted_eval);
  }

  const bool zero = all_zero(u);
  if (zero) {
    converged = true;
    reason = iterations == 0 ? "zero seed: adjoint singular, seed is a trivial fixed point"
                             : "reached m = 0";
  }

  ResourceProfile m_star = subcell_profile(g, u, cfg.kappa);
  OptimizerResult result{m_star,
                         objective(m_star, cfg.mu, cfg.c, g, cfg.solver),
                         iterations,
                         converged,
                         zero,
                         reason,
                         m_star.bang_bang_fraction(),
                         std::numeric_limits<double>::quiet_NaN(),
                         jump_count(m_star),
                         current.state,
                         GridField::constant(g, 0.0),
                         std::nullopt,
                         std::nullopt,
                         0,
                         {}};
  if (!zero) {
    AdjointSolution adj = solve_adjoint(current.state);
    SwitchingData sw = switching(current.state, adj, cfg.c);
    result.phi = sw.phi;
    result.hamiltonian_flatness = hamiltonian_flatness(sw);
    result.adjoint = std::move(adj);
    result.switching = std::move(sw);
  }
  return result;
}

OptimizerResult multistart(const OptimizerConfig& cfg, const std::vector<ResourceProfile>& seeds) {
  if (seeds.empty()) throw InvalidInput("multistart needs at least one seed");
  cfg.validate();
  std::vector<std::optional<OptimizerResult>> results(seeds.size());
  const auto errors = parallel_for(seeds.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = pontryagin_maximize(cfg, seeds[i]);
  });

  std::vector<std::string> notes;
  int best = -1;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        notes.push_back("seed " + std::to_string(i) + ": " + e.what());
      }
      continue;
    }
    if (results[i]->zero_state && results[i]->iterations == 0) {
      notes.push_back("seed " + std::to_string(i) + ": " + results[i]->stop_reason);
    }
    if (best < 0 || results[i]->F_value > results[static_cast<std::size_t>(best)]->F_value) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    std::string msg = "all multistart seeds failed";
    for (const auto& n : notes) msg += "; " + n;
    throw Error(msg);
  }
  OptimizerResult out = std::move(*results[static_cast<std::size_t>(best)]);
  out.seed_index = best;
  out.seed_notes = std::move(notes);
  return out;
}

ResourceProfile random_bang_bang(std::uint64_t seed, double kappa, int max_jumps) {
  std::mt19937_64 rng(seed);
  const int jumps = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, max_jumps)));
  std::vector<double> b{0.0};
  for (int j = 0; j < jumps; ++j) b.push_back(std::generate_canonical<double, 53>(rng));
  std::sort(b.begin(), b.end());
  b.push_back(1.0);
  std::vector<double> v;
  const bool start_high = (rng() & 1U) != 0;
  for (int j = 0; j <= jumps; ++j) v.push_back(((j % 2 == 0) == start_high) ? kappa : 0.0);
  return ResourceProfile(std::move(b), std::move(v), kappa);
}

std::vector<ResourceProfile> default_seeds(const OptimizerConfig& cfg) {
  cfg.validate();
  std::vector<ResourceProfile> seeds;
  for (int i = 1; i <= 9; ++i) seeds.push_back(ResourceProfile::crenel(0.1 * i, cfg.kappa));

  const double mu_bar = cfg.mu_bar_guess > 0.0 ? cfg.mu_bar_guess : estimate_mu_bar(cfg.c, cfg.kappa);
  const int k_max = std::max(1, static_cast<int>(std::ceil(2.0 * std::sqrt(mu_bar / cfg.mu))));
  for (int k = 1; k <= k_max; ++k) {
    const double mu_k = static_cast<double>(k) * k * cfg.mu;
    const Grid coarse = make_grid(resolved_grid_size(1024, mu_k));
    const CrenelOptimum best = maximize_over_crenels(mu_k, cfg.c, cfg.kappa, coarse, cfg.solver);
    if (best.ell_star <= 0.0) continue;
    seeds.push_back(tile_k_symmetric(ResourceProfile::crenel(best.ell_star, cfg.kappa), k));
  }
  for (int r = 0; r < cfg.random_seeds; ++r) {
    seeds.push_back(random_bang_bang(cfg.rng_seed + static_cast<std::uint64_t>(r), cfg.kappa));
  }
  return seeds;
}

double IdentitySides::mismatch() const { return std::abs(lhs - rhs); }

double IdentitySides::relative_mismatch() const {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return mismatch() / scale;
}

IdentitySides scaling_check_Bmu(const ResourceProfile& m, double mu, double B, double c,
                                const Grid& g, const SolverOptions& opts) {
  if (!(B > 0.0)) throw InvalidInput("B must be positive");
  const ResourceProfile scaled(m.shape().transformed(1.0, B), B * m.kappa());
  return {objective(scaled, B * mu, c, g, opts), B * objective(m, mu, c, g, opts)};
}

}  // namespace kppopt
