#pragma once

#include "kppopt/grid.hpp"
#include "kppopt/profile.hpp"
#include "kppopt/tridiagonal.hpp"

namespace kppopt {

struct SolverOptions {
  double tol_residual = 1e-11;  // absolute, infinity norm
  int max_newton = 50;
  int max_monotone = 5000;
  double damping_min = 1.0 / (1 << 20);
  double positive_floor = 0.0;
  bool force_monotone = false;  // skip Newton; used to exercise the fallback
};

enum class SolveMethod { newton, monotone };

const char* to_string(SolveMethod m);

/// Nonnegative steady state of -mu theta'' = theta (m - theta) with
/// homogeneous Neumann conditions on the grid of `m`.
struct StateSolution {
  GridField theta;
  GridField m;  // cell-averaged resource the state was solved for
  double mu;
  double residual_norm;
  double tolerance;  // effective residual tolerance, see residual_tolerance()
  int iterations;
  SolveMethod method;
};

/// Finite-difference -mu D2 with ghost-point reflection at both ends.
Tridiagonal neumann_operator(const Grid& g, double mu);

/// Discrete residual A theta - theta (m - theta), nodewise.
std::vector<double> state_residual_vector(const GridField& theta, const GridField& m, double mu);

/// Infinity norm of the discrete residual, Neumann rows included.
double state_residual(const GridField& theta, const ResourceProfile& m, double mu);
double state_residual(const GridField& theta, const GridField& m, double mu);

/// Residual tolerance actually enforced: tol_residual, raised to the
/// rounding floor of the stencil when 4 mu / h^2 makes it unattainable.
double residual_tolerance(const SolverOptions& opts, const Grid& g, double mu, double scale);

StateSolution solve_state(const ResourceProfile& m, double mu, const Grid& g,
                          const SolverOptions& opts = {});

/// Same solve on already-sampled resource values; the supersolution used as
/// the starting point is max(m).
StateSolution solve_state(const GridField& m, double mu, const SolverOptions& opts = {});

/// Newton iteration from an arbitrary positive starting point. Throws
/// NonConvergence if it stalls or hits max_newton.
StateSolution solve_state_newton(const GridField& m, double mu, const GridField& initial,
                                 const SolverOptions& opts = {});

/// One step of the monotone scheme
///   -mu D2 next + K next = theta (m - theta) + K theta,  K = 2 kappa.
std::vector<double> monotone_step(const GridField& theta, const GridField& m, double mu,
                                  double kappa);

}  // namespace kppopt
