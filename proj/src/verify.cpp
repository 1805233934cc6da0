#include "kppopt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "kppopt/adjoint.hpp"
#include "kppopt/errors.hpp"
#include "kppopt/optimizer.hpp"
#include "kppopt/symmetry.hpp"

namespace kppopt {

namespace {

double rel_tol(double tol, double a, double b) { return tol * std::max(std::abs(a), std::abs(b)); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

const char* to_string(Relation r) {
  switch (r) {
    case Relation::equal: return "|lhs-rhs|<=tol";
    case Relation::at_most: return "lhs<=rhs+tol";
    case Relation::at_least: return "lhs>=rhs-tol";
  }
  return "?";
}

CheckRecord make_check(std::string suite, std::string name, double lhs, double rhs,
                       double tolerance, Relation relation) {
  bool pass = false;
  switch (relation) {
    case Relation::equal: pass = std::abs(lhs - rhs) <= tolerance; break;
    case Relation::at_most: pass = lhs <= rhs + tolerance; break;
    case Relation::at_least: pass = lhs >= rhs - tolerance; break;
  }
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) pass = false;
  return CheckRecord{std::move(suite), std::move(name), lhs, rhs, tolerance, relation, pass};
}

std::vector<CheckRecord> check_constant_exactness(const VerifyOptions& o) {
  std::vector<CheckRecord> out;
  for (double a : {0.3, 1.0}) {
    for (double mu : {0.01, 1.0, 100.0}) {
      const double level = a * o.kappa;
      const Grid g = make_grid(resolved_grid_size(o.n, mu));
      const double f = objective(ResourceProfile::constant(level, o.kappa), mu, o.c, g, o.solver);
      out.push_back(make_check("constant", "a=" + fmt("%g", a) + " mu=" + fmt("%g", mu), f,
                               (1.0 - o.c) * level, 1e-10, Relation::equal));
    }
  }
  return out;
}

std::vector<CheckRecord> check_dilation(const VerifyOptions& o) {
  const Grid g = make_grid(o.n);
  const IdentitySides s =
      dilation_identity_check(ResourceProfile::crenel(0.3, o.kappa), 0.05, 2.0, o.c, g, o.solver);
  return {make_check("dilation", "crenel(0.3) mu=0.05 lambda=2", s.lhs, s.rhs,
                     rel_tol(1e-6, s.lhs, s.rhs), Relation::equal)};
}

std::vector<CheckRecord> check_ksym(const VerifyOptions& o) {
  std::vector<CheckRecord> out;
  const Grid g = make_grid(o.n);
  for (int k : {2, 4, 8}) {
    const double mu = 0.25 / (k * k);
    const IdentitySides s =
        ksym_identity_check(ResourceProfile::crenel(0.4, o.kappa), k, mu, o.c, g, o.solver);
    out.push_back(make_check("ksym", "crenel(0.4) k=" + std::to_string(k) + " k^2mu=0.25", s.lhs,
                             s.rhs, 2e-5 * (1.0 + std::abs(s.rhs)), Relation::equal));
  }
  return out;
}

std::vector<CheckRecord> check_bscaling(const VerifyOptions& o) {
  std::vector<CheckRecord> out;
  const Grid g = make_grid(o.n);
  for (double B : {0.5, 2.5}) {
    const IdentitySides s =
        scaling_check_Bmu(ResourceProfile::crenel(0.4, o.kappa), 0.02, B, o.c, g, o.solver);
    out.push_back(make_check("bscaling", "crenel(0.4) mu=0.02 B=" + fmt("%g", B), s.lhs, s.rhs,
                             rel_tol(1e-6, s.lhs, s.rhs), Relation::equal));
  }
  return out;
}

std::vector<CheckRecord> check_gradient(const VerifyOptions& o) {
  const double mu = 0.1;
  const double eps = 1e-5;
  const Grid g = make_grid(o.gradient_n);
  std::mt19937_64 rng(o.rng_seed);
  const ResourceProfile m = random_bang_bang(rng(), o.kappa);
  const GridField ms = sample_resource(m, g);
  const StateSolution st = solve_state(ms, mu, o.solver);
  const SwitchingData sw = switching(st, solve_adjoint(st), o.c);
  const GridField grad = gateaux_gradient(sw);

  std::vector<CheckRecord> out;
  for (int d = 0; d < 5; ++d) {
    // Piecewise-constant direction pointing into the admissible set.
    const int pieces = 2 + static_cast<int>(rng() % 6);
    std::vector<double> cuts{0.0};
    for (int j = 1; j < pieces; ++j) cuts.push_back(uniform(rng, 0.0, 1.0));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(1.0);
    std::vector<double> amp;
    for (int j = 0; j < pieces; ++j) amp.push_back(uniform(rng, 0.2, 1.0));

    std::vector<double> h(g.size()), plus(g.size()), minus(g.size()), gh(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.x(static_cast<int>(i));
      const auto piece = std::upper_bound(cuts.begin() + 1, cuts.end() - 1, x) - cuts.begin() - 1;
      const double mi = ms.values()[i];
      h[i] = (mi < 0.5 * o.kappa ? 1.0 : -1.0) * amp[static_cast<std::size_t>(piece)];
      plus[i] = mi + eps * h[i];
      minus[i] = mi - eps * h[i];
      gh[i] = grad.values()[i] * h[i];
    }
    const double analytic = integrate(GridField(g, gh));
    const double fd = (objective(GridField(g, plus), mu, o.c, o.solver) -
                       objective(GridField(g, minus), mu, o.c, o.solver)) /
                      (2.0 * eps);
    out.push_back(make_check("gradient", "direction " + std::to_string(d), analytic, fd,
                             rel_tol(1e-4, analytic, fd), Relation::equal));
  }
  return out;
}

std::vector<CheckRecord> check_mu_derivative_bound(const VerifyOptions& o) {
  const double s = 1e-3;
  std::mt19937_64 rng(o.rng_seed + 1);
  std::vector<CheckRecord> out;
  for (int t = 0; t < 5; ++t) {
    const ResourceProfile m = random_bang_bang(rng(), o.kappa);
    const double mu = log_uniform(rng, 1e-2, 1.0);
    const Grid g = make_grid(resolved_grid_size(o.gradient_n, mu));
    const double slope = (objective(m, mu * (1.0 + s), o.c, g, o.solver) -
                          objective(m, mu, o.c, g, o.solver)) /
                         (mu * s);
    const double bound = o.kappa / mu;
    out.push_back(make_check("mu_derivative", "sample " + std::to_string(t) + " mu=" +
                                                  fmt("%.4g", mu),
                             slope, bound, 1e-3 * bound, Relation::at_most));
  }
  return out;
}

std::vector<CheckRecord> check_mu_perturbation(const VerifyOptions& o) {
  std::mt19937_64 rng(o.rng_seed + 2);
  std::vector<CheckRecord> out;
  for (int t = 0; t < 5; ++t) {
    const ResourceProfile m = random_bang_bang(rng(), o.kappa);
    const double mu = log_uniform(rng, 1e-2, 1.0);
    const double r = t % 2 == 0 ? 0.05 : 0.2;
    const double mu_r = mu * (1.0 - r) * (1.0 - r);
    const Grid g = make_grid(resolved_grid_size(o.gradient_n, mu_r));
    const double diff = objective(m, mu_r, o.c, g, o.solver) - objective(m, mu, o.c, g, o.solver);
    out.push_back(make_check("mu_perturbation", "sample " + std::to_string(t) + " mu=" +
                                                    fmt("%.4g", mu) + " r=" + fmt("%g", r),
                             diff, -2.0 * o.kappa * r, 1e-6, Relation::at_least));
  }
  return out;
}

std::vector<CheckRecord> check_flattening(const VerifyOptions& o) {
  const ResourceProfile m = ResourceProfile::crenel(0.5, o.kappa);
  auto scaled_deviation = [&](double mu) {
    const Grid g = make_grid(resolved_grid_size(o.gradient_n, mu));
    const StateSolution st = solve_state(m, mu, g, o.solver);
    const double mm = mass(m);
    double dev = 0.0;
    for (double v : st.theta.values()) dev = std::max(dev, std::abs(v - mm));
    return dev * std::sqrt(mu);
  };
  return {make_check("flattening", "crenel(0.5) mu=1000 vs 4x mu=1", scaled_deviation(1000.0),
                     4.0 * scaled_deviation(1.0), 0.0, Relation::at_most)};
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"constant",      "dilation",       "ksym",
                                              "bscaling",      "gradient",       "mu_derivative",
                                              "mu_perturbation", "flattening"};
  return names;
}

std::vector<CheckRecord> run_verify(const std::vector<std::string>& suites, const VerifyOptions& o) {
  using Fn = std::function<std::vector<CheckRecord>(const VerifyOptions&)>;
  static const std::map<std::string, Fn> table{
      {"constant", check_constant_exactness},   {"dilation", check_dilation},
      {"ksym", check_ksym},                     {"bscaling", check_bscaling},
      {"gradient", check_gradient},             {"mu_derivative", check_mu_derivative_bound},
      {"mu_perturbation", check_mu_perturbation}, {"flattening", check_flattening}};
  std::vector<CheckRecord> out;
  for (const auto& s : suites) {
    const auto it = table.find(s);
    if (it == table.end()) throw InvalidInput("unknown verify suite: " + s);
    auto part = it->second(o);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace kppopt
