// kppopt: batch front end for state solves, resource optimization, G sweeps,
// quasi-maximizer construction and the identity checks.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kppopt/adjoint.hpp"
#include "kppopt/errors.hpp"
#include "kppopt/io.hpp"
#include "kppopt/optimizer.hpp"
#include "kppopt/quasi.hpp"
#include "kppopt/sweep.hpp"
#include "kppopt/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kppopt;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kSolverFailure = 2, kDegenerate = 3 };

const char* const kGridRule = "n = max(requested, ceil(10/sqrt(mu))) rounded up to a power of two";

// Raw command-line values; a setting counts as given only if its flag was used.
struct Flags {
  std::string config;
  std::string out = ".";
  int n = 0;
  double mu = 0.0;
  double c = 0.0;
  double kappa = 0.0;
  int jobs = 1;
  std::uint64_t rng_seed = 0;
  std::string profile;
  double crenel = 0.0;
  double mu_min = 0.0, mu_max = 0.0;
  int mu_count = 0;
  double band_tol = 0.0;
  double mu_bar_guess = 0.0;
  int max_outer = 0;
  std::vector<std::string> suites;
};

class Settings {
 public:
  Settings(const Flags& flags, const CLI::App& app, const CLI::App& sub, json config)
      : flags_(flags), app_(app), sub_(sub), config_(std::move(config)) {}

  bool flag_used(const std::string& flag) const {
    if (flag.empty()) return false;
    for (const CLI::App* a : {&app_, &sub_}) {
      const CLI::Option* opt = a->get_option_no_throw(flag);
      if (opt != nullptr && opt->count() > 0) return true;
    }
    return false;
  }

  template <typename T>
  T get(const std::string& flag, const std::string& key, const T& flag_value,
        const T& fallback) const {
    if (flag_used(flag)) return flag_value;
    if (config_.contains(key)) return config_.at(key).get<T>();
    return fallback;
  }
  bool given(const std::string& flag, const std::string& key) const {
    return flag_used(flag) || config_.contains(key);
  }
  const json& config() const { return config_; }

  std::string out() const { return get<std::string>("--out", "out", flags_.out, "."); }
  int n(int fallback) const { return get("--n", "n", flags_.n, fallback); }
  double mu() const {
    if (!given("--mu", "mu")) throw InvalidInput("mu is required");
    const double mu = get("--mu", "mu", flags_.mu, 0.0);
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("mu must be positive");
    return mu;
  }
  double c() const {
    const double c = get("--c", "c", flags_.c, 2.0);
    if (!std::isfinite(c)) throw InvalidInput("c must be finite");
    return c;
  }
  double kappa() const {
    const double k = get("--kappa", "kappa", flags_.kappa, 1.0);
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("kappa must be positive");
    return k;
  }
  int jobs() const { return std::max(1, get("--jobs", "jobs", flags_.jobs, 1)); }
  std::uint64_t rng_seed() const {
    return get<std::uint64_t>("--rng-seed", "rng_seed", flags_.rng_seed, 1);
  }

  const Flags& flags() const { return flags_; }

 private:
  const Flags& flags_;
  const CLI::App& app_;
  const CLI::App& sub_;
  json config_;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + path + ": " + e.what());
  }
}

// A profile given inline as JSON text/object or as a path to a JSON file.
ResourceProfile parse_profile(const json& spec) {
  if (spec.is_object()) return profile_from_json(spec);
  if (!spec.is_string()) throw InvalidInput("profile must be an object or a path");
  const auto text = spec.get<std::string>();
  if (!text.empty() && text.front() == '{') {
    try {
      return profile_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw InvalidInput(std::string("malformed inline profile: ") + e.what());
    }
  }
  return profile_from_json(read_json_file(text));
}

fs::path prepare_out(const Settings& s) {
  fs::path dir(s.out());
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InvalidInput("cannot create output directory " + dir.string());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string fields_csv(const std::vector<std::string>& names, const std::vector<const GridField*>& cols) {
  std::ostringstream out;
  out << "x";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  const Grid& g = cols.front()->grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_number(g.x(static_cast<int>(i)));
    for (const GridField* f : cols) out << ',' << format_number(f->values()[i]);
    out << '\n';
  }
  return out.str();
}

json grid_record(int requested, int used) {
  return {{"n_requested", requested}, {"n_used", used}, {"n_rule", kGridRule}};
}

// ---------------------------------------------------------------- solve

int cmd_solve(const Settings& s) {
  const double mu = s.mu();
  const double kappa = s.kappa();
  std::optional<ResourceProfile> m;
  if (s.given("--profile", "profile")) {
    m = parse_profile(s.flag_used("--profile") ? json(s.flags().profile) : s.config().at("profile"));
  } else if (s.given("--crenel", "crenel")) {
    m = ResourceProfile::crenel(s.get("--crenel", "crenel", s.flags().crenel, 0.5), kappa);
  } else {
    throw InvalidInput("solve needs a resource profile (--profile or --crenel)");
  }
  const int requested = s.n(1024);
  const Grid g = make_grid(resolved_grid_size(requested, mu));
  const fs::path dir = prepare_out(s);

  const StateSolution st = solve_state(*m, mu, g);
  const GridField ms = sample_resource(*m, g);
  write_text(dir / "fields.csv", fields_csv({"m", "theta"}, {&ms, &st.theta}));

  json summary{{"command", "solve"},
               {"mu", mu},
               {"grid", grid_record(requested, g.n())},
               {"mass", mass(*m)},
               {"integral_theta", integrate(st.theta)},
               {"residual", st.residual_norm},
               {"residual_tolerance", st.tolerance},
               {"iterations", st.iterations},
               {"method", to_string(st.method)},
               {"profile", to_json(*m)}};
  if (s.given("--c", "c")) summary["F"] = integrate(st.theta) - s.c() * mass(*m);
  write_json(dir / "summary.json", summary);
  return kOk;
}

// ------------------------------------------------------------- optimize

struct OptimizeRun {
  OptimizerConfig cfg;
  int requested_n;
  OptimizerResult result;
  std::size_t seed_count;
};

OptimizeRun run_optimize(const Settings& s) {
  OptimizerConfig cfg;
  cfg.mu = s.mu();
  cfg.c = s.c();
  cfg.kappa = s.kappa();
  const int requested = s.n(4096);
  cfg.grid_n = resolved_grid_size(requested, cfg.mu);
  cfg.max_outer = s.get("--max-outer", "max_outer", s.flags().max_outer, cfg.max_outer);
  cfg.tie_tol = s.get<double>("", "tie_tol", 0.0, cfg.tie_tol);
  cfg.switch_fraction = s.get<double>("", "switch_fraction", 0.0, cfg.switch_fraction);
  cfg.random_seeds = s.get<int>("", "random_seeds", 0, cfg.random_seeds);
  cfg.mu_bar_guess = s.get("--mu-bar", "mu_bar_guess", s.flags().mu_bar_guess, 0.0);
  cfg.rng_seed = s.rng_seed();
  cfg.jobs = s.jobs();
  cfg.validate();

  std::vector<ResourceProfile> seeds;
  if (s.config().contains("seeds")) {
    for (const auto& spec : s.config().at("seeds")) seeds.push_back(parse_profile(spec));
    if (seeds.empty()) throw InvalidInput("seeds must not be empty");
  } else {
    seeds = default_seeds(cfg);
  }
  OptimizerResult r = multistart(cfg, seeds);
  return OptimizeRun{cfg, requested, std::move(r), seeds.size()};
}

json optimize_report(const OptimizeRun& run) {
  const OptimizerResult& r = run.result;
  return json{{"command", "optimize"},
              {"mu", run.cfg.mu},
              {"c", run.cfg.c},
              {"kappa", run.cfg.kappa},
              {"rng_seed", run.cfg.rng_seed},
              {"grid", grid_record(run.requested_n, run.cfg.grid_n)},
              {"F_value", r.F_value},
              {"mass", mass(r.m_star)},
              {"bang_bang_fraction", r.bang_bang_fraction},
              {"jump_count", r.jump_count},
              {"total_variation", total_variation(r.m_star)},
              {"hamiltonian_flatness", r.hamiltonian_flatness},
              {"converged", r.converged},
              {"zero_state", r.zero_state},
              {"iterations", r.iterations},
              {"stop_reason", r.stop_reason},
              {"seed_count", run.seed_count},
              {"best_seed", r.seed_index},
              {"seed_notes", r.seed_notes}};
}

void write_optimize_fields(const fs::path& path, const OptimizerResult& r) {
  const Grid& g = r.theta.theta.grid();
  const GridField zero = GridField::constant(g, 0.0);
  const GridField& p = r.adjoint ? r.adjoint->p : zero;
  const GridField& h = r.switching ? r.switching->hamiltonian : zero;
  write_text(path, fields_csv({"m", "theta", "p", "phi", "H"},
                              {&r.theta.m, &r.theta.theta, &p, &r.phi, &h}));
}

int cmd_optimize(const Settings& s) {
  const OptimizeRun run = run_optimize(s);
  const fs::path dir = prepare_out(s);
  write_json(dir / "profile.json", to_json(run.result.m_star));
  write_optimize_fields(dir / "fields.csv", run.result);
  write_json(dir / "report.json", optimize_report(run));
  return kOk;
}

// -------------------------------------------------------------- sweep-g

int cmd_sweep_g(const Settings& s) {
  const Flags& f = s.flags();
  const double lo = s.get("--mu-min", "mu_min", f.mu_min, 1e-3);
  const double hi = s.get("--mu-max", "mu_max", f.mu_max, 10.0);
  const int count = s.get("--mu-count", "mu_count", f.mu_count, 33);
  const double band_tol = s.get("--band-tol", "band_tol", f.band_tol, -1.0);
  const double c = s.c();
  const double kappa = s.kappa();
  const int base_n = s.n(2048);
  const std::vector<double> grid = log_grid(lo, hi, count);
  const fs::path dir = prepare_out(s);

  const SweepResult sw = sweep_G(grid, c, kappa, base_n, s.jobs(), {}, band_tol);
  std::ostringstream csv;
  csv << "mu,ell_star,G,n,status\n";
  for (const auto& r : sw.records) {
    csv << format_number(r.mu) << ',' << format_number(r.ell_star) << ','
        << format_number(r.G_value) << ',' << r.grid_n << ',' << (r.ok() ? "ok" : "failed") << '\n';
  }
  write_text(dir / "g_curve.csv", csv.str());

  json failures = json::array();
  for (const auto& r : sw.records) {
    if (!r.ok()) failures.push_back({{"mu", r.mu}, {"status", r.status}});
  }
  write_json(dir / "band.json", json{{"command", "sweep-g"},
                                     {"c", c},
                                     {"kappa", kappa},
                                     {"mu_min", lo},
                                     {"mu_max", hi},
                                     {"mu_count", count},
                                     {"grid", {{"n_base", base_n}, {"n_rule", kGridRule}}},
                                     {"G_max", sw.G_max},
                                     {"mu_bar_l", sw.mu_bar_l},
                                     {"mu_bar_r", sw.mu_bar_r},
                                     {"argmax_band_tol", sw.argmax_band_tol},
                                     {"failures", failures}});
  return kOk;
}

// ---------------------------------------------------------------- quasi

int cmd_quasi(const Settings& s) {
  const OptimizeRun run = run_optimize(s);
  const fs::path dir = prepare_out(s);
  write_json(dir / "m_bar.json", to_json(run.result.m_star));
  const QuasiMaximizerReport q = build_quasi_maximizer(run.result, run.cfg.c);
  const IntervalDecomposition& d = q.decomposition;
  write_json(dir / "m_hat.json", to_json(q.m_hat));
  const double slack = 1e-6;
  write_json(dir / "quasi_report.json",
             json{{"command", "quasi"},
                  {"mu", q.mu},
                  {"c", run.cfg.c},
                  {"kappa", run.cfg.kappa},
                  {"grid", grid_record(run.requested_n, run.cfg.grid_n)},
                  {"decomposition",
                   {{"a", d.a},
                    {"A", d.A},
                    {"i_star", d.i_star},
                    {"delta", d.delta},
                    {"ell_local", d.ell_local},
                    {"F_total", d.F_total},
                    {"weighted_sum", d.weighted_sum()}}},
                  {"k_mu", q.k_mu},
                  {"r_mu", q.r_mu},
                  {"sigma_mu", q.sigma_mu},
                  {"partition_exact", q.k_mu * d.delta + q.r_mu == 1.0},
                  {"pattern", to_json(ResourceProfile(q.pattern, run.cfg.kappa))},
                  {"m_hat", to_json(q.m_hat)},
                  {"m_hat_jump_count", jump_count(q.m_hat)},
                  {"F_hat", q.F_hat},
                  {"F_bar", q.F_bar},
                  {"gap_bound", q.gap_bound},
                  {"sandwich_slack", slack},
                  {"sandwich_holds", q.F_bar - q.gap_bound - slack <= q.F_hat &&
                                         q.F_hat <= q.F_bar + slack},
                  {"mu_over_delta_sq", q.mu_over_delta_sq()},
                  {"optimizer", optimize_report(run)}});
  return kOk;
}

// --------------------------------------------------------------- verify

int cmd_verify(const Settings& s) {
  VerifyOptions o;
  o.n = s.n(o.n);
  o.c = s.c();
  o.kappa = s.kappa();
  o.rng_seed = s.rng_seed();
  std::vector<std::string> suites = verify_suite_names();
  if (!s.flags().suites.empty()) {
    suites = s.flags().suites;
  } else if (s.config().contains("suites")) {
    suites = s.config().at("suites").get<std::vector<std::string>>();
  }
  const fs::path dir = prepare_out(s);
  const std::vector<CheckRecord> checks = run_verify(suites, o);

  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    arr.push_back({{"suite", c.suite},
                   {"name", c.name},
                   {"lhs", c.lhs},
                   {"rhs", c.rhs},
                   {"tolerance", c.tolerance},
                   {"relation", to_string(c.relation)},
                   {"pass", c.pass}});
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.suite << ": " << c.name << '\n';
  }
  write_json(dir / "verify.json", json{{"command", "verify"},
                                       {"n", o.n},
                                       {"c", o.c},
                                       {"kappa", o.kappa},
                                       {"rng_seed", o.rng_seed},
                                       {"suites", suites},
                                       {"checks", arr},
                                       {"all_pass", all}});
  return all ? kOk : kVerifyFailed;
}

int report_failure(const Settings* s, const std::string& kind, const std::string& message, int code) {
  const json diag{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << diag.dump() << '\n';
  if (s != nullptr) {
    try {
      write_json(prepare_out(*s) / "error.json", diag);
    } catch (const std::exception&) {
      // The diagnostic already went to stderr.
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal resource profiles for the logistic diffusive steady state"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON config file; flags override its keys");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--n", f.n, "Requested grid intervals (raised to resolve sqrt(mu))");
  app.add_option("--mu", f.mu, "Diffusivity");
  app.add_option("--c", f.c, "Cost coefficient");
  app.add_option("--kappa", f.kappa, "Resource bound");
  app.add_option("--jobs", f.jobs, "Worker threads");
  app.add_option("--rng-seed", f.rng_seed, "Seed for random profiles");

  auto* solve = app.add_subcommand("solve", "Solve the state equation for one profile");
  solve->add_option("--profile", f.profile, "Profile JSON (inline or file path)");
  solve->add_option("--crenel", f.crenel, "Use crenel(ell) as the profile");

  auto* optimize = app.add_subcommand("optimize", "Maximize F over admissible profiles");
  auto* quasi = app.add_subcommand("quasi", "Optimize, then build the k-symmetric quasi-maximizer");
  for (auto* sub : {optimize, quasi}) {
    sub->add_option("--max-outer", f.max_outer, "Bathtub iteration cap");
    sub->add_option("--mu-bar", f.mu_bar_guess, "Argmax of G used to size the seed family");
  }

  auto* sweep = app.add_subcommand("sweep-g", "Tabulate G(mu) over a log grid");
  sweep->add_option("--mu-min", f.mu_min, "Smallest mu");
  sweep->add_option("--mu-max", f.mu_max, "Largest mu");
  sweep->add_option("--mu-count", f.mu_count, "Number of grid points");
  sweep->add_option("--band-tol", f.band_tol, "Argmax band tolerance");

  auto* verify = app.add_subcommand("verify", "Run identity and bound checks");
  verify->add_option("--suite", f.suites, "Suite to run (repeatable)");

  CLI11_PARSE(app, argc, argv);

  const CLI::App& sub = *app.get_subcommands().front();
  std::optional<Settings> settings;
  try {
    json config = json::object();
    if (!f.config.empty()) config = read_json_file(f.config);
    if (!config.is_object()) throw InvalidInput("config must be a JSON object");
    settings.emplace(f, app, sub, std::move(config));
    if (solve->parsed()) return cmd_solve(*settings);
    if (optimize->parsed()) return cmd_optimize(*settings);
    if (sweep->parsed()) return cmd_sweep_g(*settings);
    if (quasi->parsed()) return cmd_quasi(*settings);
    return cmd_verify(*settings);
  } catch (const DegenerateState& e) {
    return report_failure(settings ? &*settings : nullptr, "DegenerateState", e.what(), kDegenerate);
  } catch (const StructureViolation& e) {
    return report_failure(settings ? &*settings : nullptr, "StructureViolation", e.what(), kDegenerate);
  } catch (const InvalidInput& e) {
    return report_failure(settings ? &*settings : nullptr, "InvalidInput", e.what(), kSolverFailure);
  } catch (const NonConvergence& e) {
    return report_failure(settings ? &*settings : nullptr, "NonConvergence", e.what(), kSolverFailure);
  } catch (const SingularSystem& e) {
    return report_failure(settings ? &*settings : nullptr, "SingularSystem", e.what(), kSolverFailure);
  } catch (const std::exception& e) {
    return report_failure(settings ? &*settings : nullptr, "Error", e.what(), kSolverFailure);
  }
}
