#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kppopt/state.hpp"

namespace kppopt {

/// How lhs, rhs and tolerance combine into pass/fail.
enum class Relation { equal, at_most, at_least };

const char* to_string(Relation r);

struct CheckRecord {
  std::string suite;
  std::string name;
  double lhs;
  double rhs;
  double tolerance;  // absolute, already scaled
  Relation relation;
  bool pass;
};

/// equal: |lhs - rhs| <= tol; at_most: lhs <= rhs + tol; at_least: lhs >= rhs - tol.
CheckRecord make_check(std::string suite, std::string name, double lhs, double rhs,
                       double tolerance, Relation relation);

struct VerifyOptions {
  int n = 1 << 13;
  int gradient_n = 1 << 12;
  double c = 2.0;
  double kappa = 1.0;
  std::uint64_t rng_seed = 1;
  SolverOptions solver;
};

std::vector<CheckRecord> check_constant_exactness(const VerifyOptions& o);
std::vector<CheckRecord> check_dilation(const VerifyOptions& o);
std::vector<CheckRecord> check_ksym(const VerifyOptions& o);
std::vector<CheckRecord> check_bscaling(const VerifyOptions& o);
/// Adjoint directional derivative against central differences, 5 directions.
std::vector<CheckRecord> check_gradient(const VerifyOptions& o);
/// Forward-difference slope of mu -> F_mu(m) against kappa / mu.
std::vector<CheckRecord> check_mu_derivative_bound(const VerifyOptions& o);
/// F_{mu (1-r)^2}(m) - F_mu(m) >= -2 kappa r.
std::vector<CheckRecord> check_mu_perturbation(const VerifyOptions& o);
/// sqrt(mu) |theta - mass|_inf at mu = 1000 against 4x its value at mu = 1.
std::vector<CheckRecord> check_flattening(const VerifyOptions& o);

const std::vector<std::string>& verify_suite_names();

/// Runs the named suites in the order given; unknown names throw InvalidInput.
std::vector<CheckRecord> run_verify(const std::vector<std::string>& suites, const VerifyOptions& o);

}  // namespace kppopt
