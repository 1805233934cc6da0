#include "kppopt/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kppopt/errors.hpp"

namespace kppopt {

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void require_positive_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("mu must be positive");
}

// Jacobian of the residual: A + diag(2 theta - m).
Tridiagonal linearized_operator(const Grid& g, double mu, const std::vector<double>& theta,
                                const std::vector<double>& m) {
  Tridiagonal j = neumann_operator(g, mu);
  for (std::size_t i = 0; i < j.size(); ++i) j.diag[i] += 2.0 * theta[i] - m[i];
  return j;
}

// Starting guess is a supersolution at level `top`; the maximum principle
// check uses the same bound.
void check_maximum_principle(const std::vector<double>& theta, double top) {
  const double slack = 1e-10 * std::max(1.0, top);
  for (double v : theta) {
    if (v < -slack || v > top + slack) {
      throw NonConvergence("discrete maximum principle violated", theta,
                           std::numeric_limits<double>::quiet_NaN());
    }
  }
}

StateSolution solve_monotone(const GridField& m, double mu, double top,
                             const SolverOptions& opts) {
  const Grid& g = m.grid();
  const double tol = residual_tolerance(opts, g, mu, top);
  GridField theta = GridField::constant(g, top);
  std::vector<double> best = theta.values();
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_monotone; ++it) {
    auto next = monotone_step(theta, m, mu, top);
    for (double& v : next) v = std::max(v, opts.positive_floor);
    theta = GridField(g, std::move(next));
    const double res = inf_norm(state_residual_vector(theta, m, mu));
    if (res < best_res) {
      best_res = res;
      best = theta.values();
    }
    if (res <= tol) {
      return StateSolution{theta, m, mu, res, tol, it, SolveMethod::monotone};
    }
  }
  throw NonConvergence("monotone iteration hit max_monotone", std::move(best), best_res);
}

StateSolution solve_from_top(const GridField& m, double mu, double top,
                             const SolverOptions& opts) {
  require_positive_mu(mu);
  const Grid& g = m.grid();
  if (m.max() <= 0.0) {
    // Zero is the only nonnegative solution.
    return StateSolution{GridField::constant(g, 0.0), m, mu, 0.0, opts.tol_residual, 0,
                         SolveMethod::newton};
  }
  StateSolution sol = [&] {
    if (!opts.force_monotone) {
      try {
        return solve_state_newton(m, mu, GridField::constant(g, top), opts);
      } catch (const NonConvergence&) {
      } catch (const SingularSystem&) {
      }
    }
    return solve_monotone(m, mu, top, opts);
  }();
  check_maximum_principle(sol.theta.values(), m.max());
  return sol;
}

}  // namespace

const char* to_string(SolveMethod m) {
  return m == SolveMethod::newton ? "newton" : "monotone";
}

Tridiagonal neumann_operator(const Grid& g, double mu) {
  const std::size_t n = g.size();
  const double s = mu / (g.h() * g.h());
  Tridiagonal a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.diag[i] = 2.0 * s;
    a.lower[i] = -s;
    a.upper[i] = -s;
  }
  // Ghost points theta_{-1} = theta_1 and theta_{n+1} = theta_{n-1}.
  a.upper[0] = -2.0 * s;
  a.lower[n - 1] = -2.0 * s;
  return a;
}

namespace {

void residual_into(const std::vector<double>& t, const std::vector<double>& mv, double s,
                   std::vector<double>& r) {
  const std::size_t n = t.size() - 1;
  r.resize(t.size());
  for (std::size_t i = 0; i <= n; ++i) {
    const double left = i > 0 ? t[i - 1] : t[1];
    const double right = i < n ? t[i + 1] : t[n - 1];
    r[i] = s * ((t[i] - left) + (t[i] - right)) - t[i] * (mv[i] - t[i]);
  }
}

}  // namespace

std::vector<double> state_residual_vector(const GridField& theta, const GridField& m,
                                          double mu) {
  if (!(theta.grid() == m.grid())) throw InvalidInput("state and resource grids differ");
  std::vector<double> r;
  residual_into(theta.values(), m.values(), mu / (theta.grid().h() * theta.grid().h()), r);
  return r;
}

double state_residual(const GridField& theta, const GridField& m, double mu) {
  return inf_norm(state_residual_vector(theta, m, mu));
}

double state_residual(const GridField& theta, const ResourceProfile& m, double mu) {
  return state_residual(theta, sample_resource(m, theta.grid()), mu);
}

double residual_tolerance(const SolverOptions& opts, const Grid& g, double mu, double scale) {
  const double s = mu / (g.h() * g.h());
  const double floor =
      32.0 * std::numeric_limits<double>::epsilon() * (4.0 * s + scale) * scale;
  return std::max(opts.tol_residual, floor);
}

StateSolution solve_state_newton(const GridField& m, double mu, const GridField& initial,
                                 const SolverOptions& opts) {
  require_positive_mu(mu);
  const Grid& g = m.grid();
  std::vector<double> theta = initial.values();
  const double scale = std::max(m.max(), initial.max());
  const double tol = residual_tolerance(opts, g, mu, scale);
  const double s = mu / (g.h() * g.h());
  auto residual = [&](const std::vector<double>& t) {
    std::vector<double> r;
    residual_into(t, m.values(), s, r);
    return r;
  };
  std::vector<double> r = residual(theta);
  double rn = inf_norm(r);
  double last_step = std::numeric_limits<double>::infinity();
  for (int it = 0;; ++it) {
    // Below the rounding floor only a vanishing update certifies convergence.
    if (rn <= opts.tol_residual || (rn <= tol && last_step <= 1e-10 * scale)) {
      return StateSolution{GridField(g, theta), m, mu, rn, tol, it, SolveMethod::newton};
    }
    if (it == opts.max_newton) {
      throw NonConvergence("Newton iteration hit max_newton", theta, rn);
    }
    const Tridiagonal jac = linearized_operator(g, mu, theta, m.values());
    for (double& v : r) v = -v;
    const std::vector<double> delta = solve_tridiagonal(jac, r);
    double t = 1.0;
    for (;;) {
      std::vector<double> trial(theta.size());
      for (std::size_t i = 0; i < theta.size(); ++i) {
        trial[i] = std::max(theta[i] + t * delta[i], opts.positive_floor);
      }
      std::vector<double> rt = residual(trial);
      const double rtn = inf_norm(rt);
      if (rtn < rn || rn <= tol) {
        last_step = t * inf_norm(delta);
        theta = std::move(trial);
        r = std::move(rt);
        rn = rtn;
        break;
      }
      t *= 0.5;
      if (t < opts.damping_min) throw NonConvergence("Newton damping stalled", theta, rn);
    }
  }
}

std::vector<double> monotone_step(const GridField& theta, const GridField& m, double mu,
                                  double kappa) {
  const double big_k = 2.0 * kappa;
  Tridiagonal a = neumann_operator(theta.grid(), mu);
  for (double& d : a.diag) d += big_k;
  const auto& t = theta.values();
  const auto& mv = m.values();
  std::vector<double> rhs(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) rhs[i] = t[i] * (mv[i] - t[i]) + big_k * t[i];
  return solve_tridiagonal(a, rhs);
}

StateSolution solve_state(const ResourceProfile& m, double mu, const Grid& g,
                          const SolverOptions& opts) {
  return solve_from_top(sample_resource(m, g), mu, m.kappa(), opts);
}

StateSolution solve_state(const GridField& m, double mu, const SolverOptions& opts) {
  return solve_from_top(m, mu, m.max(), opts);
}

}  // namespace kppopt
