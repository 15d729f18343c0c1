// Command-line front end: scenario simulation, bound reports, sweeps, and
// verification suites with machine-readable CSV/JSON output.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hb/scenarios.hpp"

namespace {

using namespace hb;

constexpr int kExitConfigError = 2;
constexpr int kExitPhysicsError = 3;
constexpr double two_pi = 2.0 * M_PI;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PhysicsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

// Flat key = value config; values may be scalars, comma lists, or
// start:stop:step ranges.
std::map<std::string, std::string> parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  const auto to_double = [](const std::string& s) {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("cannot parse numeric value: " + s);
    }
  };
  if (text.find(':') != std::string::npos) {
    std::istringstream ss(text);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c, ':');
    const double start = to_double(a), stop = to_double(b), step = to_double(c);
    if (step <= 0.0) throw ConfigError("range step must be positive: " + text);
    for (double v = start; v <= stop + 1e-12 * step; v += step) values.push_back(v);
    return values;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(to_double(item));
  if (values.empty()) throw ConfigError("empty value list");
  return values;
}

struct RunCase {
  std::string scenario;
  double param1 = 0.0;
  double param2 = 0.0;
  std::map<std::string, double> params;
};

struct RunConfig {
  std::vector<RunCase> cases;
  int steps = 4000;
  double tol_closure = kTolClosureIntegrated;
  std::uint64_t seed = 0;
};

double get_param(const RunCase& run, const std::string& key, double fallback) {
  const auto it = run.params.find(key);
  return it == run.params.end() ? fallback : it->second;
}

double require_param(const RunCase& run, const std::string& key) {
  const auto it = run.params.find(key);
  if (it == run.params.end()) {
    throw ConfigError("missing config key: " + key);
  }
  return it->second;
}

RunConfig load_run_config(const std::string& path, int steps_override,
                          std::uint64_t seed_override, bool have_seed) {
  const auto kv = parse_config(path);
  RunConfig config;
  const auto scenario_it = kv.find("scenario");
  if (scenario_it == kv.end()) {
    throw ConfigError("config is missing the 'scenario' discriminator key");
  }
  const std::string scenario = scenario_it->second;

  config.steps = steps_override;
  if (const auto it = kv.find("steps"); it != kv.end() && steps_override == 4000) {
    config.steps = static_cast<int>(parse_values(it->second).front());
  }
  if (config.steps < 100) {
    throw ConfigError("steps per period must be >= 100");
  }
  if (const auto it = kv.find("tol_closure"); it != kv.end()) {
    config.tol_closure = parse_values(it->second).front();
  }
  if (const char* env = std::getenv("HB_TOL_CLOSURE")) {
    config.tol_closure = parse_values(env).front();
  }
  if (config.tol_closure <= 0.0) {
    throw ConfigError("closure tolerance must be positive");
  }
  if (const auto it = kv.find("seed"); it != kv.end() && !have_seed) {
    config.seed = static_cast<std::uint64_t>(parse_values(it->second).front());
  } else if (have_seed) {
    config.seed = seed_override;
  }

  // Cartesian product over all list-valued numeric keys, in key order.
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& [key, value] : kv) {
    if (key == "scenario" || key == "steps" || key == "tol_closure") continue;
    axes.emplace_back(key, parse_values(value));
  }
  std::vector<RunCase> cases(1);
  for (const auto& [key, values] : axes) {
    std::vector<RunCase> next;
    next.reserve(cases.size() * values.size());
    for (const auto& base : cases) {
      for (double v : values) {
        RunCase extended = base;
        extended.params[key] = v;
        next.push_back(std::move(extended));
      }
    }
    cases = std::move(next);
  }
  for (auto& run : cases) {
    run.scenario = scenario;
    if (scenario == "qubit") {
      run.param1 = require_param(run, "phi");
      run.param2 = get_param(run, "omega", 1.0);
    } else if (scenario == "counterexample") {
      run.param1 = require_param(run, "chi");
      run.param2 = get_param(run, "E", 1.0);
    } else if (scenario == "qutrit") {
      run.param1 = get_param(run, "omega", 1.0);
    } else if (scenario == "random") {
      run.param1 = static_cast<double>(config.seed) + get_param(run, "index", 0.0);
      run.param2 = require_param(run, "dim");
    } else {
      throw ConfigError("unknown scenario: " + scenario);
    }
  }
  config.cases = std::move(cases);
  return config;
}

BuiltScenario build_case(const RunCase& run, const RunConfig& config) {
  try {
    if (run.scenario == "qubit") {
      return build_qubit({require_param(run, "phi"), get_param(run, "omega", 1.0),
                          get_param(run, "trace_h", 0.0)});
    }
    if (run.scenario == "counterexample") {
      return build_counterexample(
          {get_param(run, "E", 1.0), require_param(run, "chi")});
    }
    if (run.scenario == "qutrit") {
      QutritScenario s;
      s.levels = {static_cast<int>(get_param(run, "level0", 0)),
                  static_cast<int>(get_param(run, "level1", 1)),
                  static_cast<int>(get_param(run, "level2", 2))};
      s.omega = get_param(run, "omega", 1.0);
      s.amplitudes = {get_param(run, "p0", 1.0 / 3), get_param(run, "p1", 1.0 / 3),
                      get_param(run, "p2", 1.0 / 3)};
      s.phases = {get_param(run, "phase1", 0.0), get_param(run, "phase2", 0.0)};
      return build_qutrit(s);
    }
    if (run.scenario == "random") {
      return random_periodic(static_cast<int>(require_param(run, "dim")),
                             static_cast<std::uint64_t>(run.param1),
                             get_param(run, "base_omega", 1.0));
    }
  } catch (const StationaryScenario& err) {
    throw PhysicsError(std::string("stationary: ") + err.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  throw ConfigError("unknown scenario: " + run.scenario);
}

struct Row {
  RunCase run;
  BoundReport report;
  double closure_defect = 0.0;
};

Row evaluate_case(const RunCase& run, const RunConfig& config) {
  const BuiltScenario scenario = build_case(run, config);
  Trajectory traj;
  try {
    traj = evolve_schedule(scenario.schedule, scenario.psi0,
                           uniform_grid(scenario.tau, config.steps));
  } catch (const std::runtime_error& err) {
    throw PhysicsError(err.what());
  }
  Row row;
  row.run = run;
  row.closure_defect = closure_defect(traj);
  try {
    row.report = full_report(traj, config.tol_closure);
  } catch (const OpenCurveError& err) {
    throw PhysicsError(err.what());
  }
  return row;
}

std::vector<Row> evaluate_all(const RunConfig& config) {
  std::vector<std::future<Row>> futures;
  futures.reserve(config.cases.size());
  for (const auto& run : config.cases) {
    futures.push_back(std::async(std::launch::async | std::launch::deferred,
                                 [&config, run] { return evaluate_case(run, config); }));
  }
  std::vector<Row> rows;
  rows.reserve(futures.size());
  for (auto& f : futures) rows.push_back(f.get());  // input order
  return rows;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw ConfigError("cannot open output path: " + out_path);
  }
  out << text;
}

std::string simulate_csv(const std::vector<Row>& rows) {
  std::ostringstream out;
  out << "scenario,param1,param2,tau,theta,fs_length,closure_defect\n";
  for (const auto& row : rows) {
    out << row.run.scenario << ',' << fmt12(row.run.param1) << ','
        << fmt12(row.run.param2) << ',' << fmt12(row.report.tau) << ','
        << fmt12(row.report.theta) << ',' << fmt12(row.report.fs_length) << ','
        << fmt12(row.closure_defect) << '\n';
  }
  return out.str();
}

std::string bounds_csv(const std::vector<Row>& rows) {
  std::ostringstream out;
  out << "scenario,param1,param2,tau,theta,fs_length,avg_dH,ml_bound,mt_bound,"
         "bd_bound,ml_ratio,mt_ratio,bd_ratio,closure_defect\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << row.run.scenario << ',' << fmt12(row.run.param1) << ','
        << fmt12(row.run.param2) << ',' << fmt12(r.tau) << ',' << fmt12(r.theta)
        << ',' << fmt12(r.fs_length) << ',' << fmt12(r.avg_uncertainty) << ','
        << fmt12(r.ml_bound) << ',' << fmt12(r.mt_bound) << ',' << fmt12(r.bd_bound)
        << ',' << fmt12(r.saturation_ratios.at("ml")) << ','
        << fmt12(r.saturation_ratios.at("mt")) << ','
        << fmt12(r.saturation_ratios.at("bd")) << ',' << fmt12(row.closure_defect)
        << '\n';
  }
  return out.str();
}

std::string rows_json(const std::vector<Row>& rows, bool with_bounds) {
  std::ostringstream out;
  out << "[\n";
  for (size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    const auto& r = row.report;
    out << "  {\"scenario\": \"" << row.run.scenario << "\""
        << ", \"param1\": " << fmt12(row.run.param1)
        << ", \"param2\": " << fmt12(row.run.param2)
        << ", \"tau\": " << fmt12(r.tau) << ", \"theta\": " << fmt12(r.theta)
        << ", \"fs_length\": " << fmt12(r.fs_length);
    if (with_bounds) {
      out << ", \"avg_dH\": " << fmt12(r.avg_uncertainty)
          << ", \"ml_bound\": " << fmt12(r.ml_bound)
          << ", \"ml_quotient_below\": " << fmt12(r.ml_quotients.below)
          << ", \"ml_quotient_above\": " << fmt12(r.ml_quotients.above)
          << ", \"not_a_bound\": " << (r.ml_is_bound ? "false" : "true")
          << ", \"mt_bound\": " << fmt12(r.mt_bound)
          << ", \"bd_bound\": " << fmt12(r.bd_bound)
          << ", \"ml_ratio\": " << fmt12(r.saturation_ratios.at("ml"))
          << ", \"mt_ratio\": " << fmt12(r.saturation_ratios.at("mt"))
          << ", \"bd_ratio\": " << fmt12(r.saturation_ratios.at("bd"));
    }
    out << ", \"closure_defect\": " << fmt12(row.closure_defect) << "}"
        << (k + 1 < rows.size() ? "," : "") << "\n";
  }
  out << "]\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Verification suites.

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst_residual = 0.0;
};

void record(std::vector<CheckResult>& results, const std::string& name,
            double worst, double tol) {
  results.push_back({name, worst < tol, worst});
}

std::vector<CheckResult> verify_qubit_tightness(int steps) {
  std::vector<CheckResult> results;
  double worst_theta = 0.0, worst_ratio = 0.0, worst_length = 0.0;
  for (double omega : {0.5, 1.0, 2.0}) {
    for (int k = 1; k <= 15; ++k) {
      const double phi = 0.2 * k;
      const BuiltScenario s = build_qubit({phi, omega, 0.0});
      const Trajectory traj =
          evolve_schedule(s.schedule, s.psi0, uniform_grid(s.tau, steps));
      const BoundReport report = full_report(traj);
      worst_theta = std::max(
          worst_theta,
          std::abs(std::remainder(report.theta - *s.theta_predicted, two_pi)));
      for (const auto& [name, ratio] : report.saturation_ratios) {
        worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
      }
      worst_length = std::max(
          worst_length, std::abs(report.fs_length - M_PI * std::sin(phi)));
    }
  }
  record(results, "theta matches pi(1+cos phi)", worst_theta, 1e-6);
  record(results, "ml/mt/bd saturation ratios = 1", worst_ratio, 1e-5);
  record(results, "fs length matches pi sin phi", worst_length, 1e-5);
  return results;
}

std::vector<CheckResult> verify_qutrit_identities(int steps) {
  std::vector<CheckResult> results;
  const QutritWitnessSet witnesses = search_qutrit_witnesses();
  results.push_back({"witnesses found for all quotient cases",
                     witnesses.complete(), witnesses.complete() ? 0.0 : 1.0});
  const auto check = [&](const char* name,
                         const std::optional<QutritScenario>& scenario,
                         bool below, bool above) {
    if (!scenario) {
      results.push_back({name, false, 1.0});
      return;
    }
    const BuiltScenario s = build_qutrit(*scenario);
    const Trajectory traj = evolve_schedule(
        s.schedule, s.psi0, uniform_grid(s.tau, std::max(steps, 1000000)));
    const QutritAnalysis analysis = analyze_qutrit(traj, 1e-6);
    const double residual =
        std::max({analysis.residual_below, analysis.residual_above,
                  analysis.ordering_ok ? 0.0 : 1.0,
                  analysis.below_equals_tau == below ? 0.0 : 1.0,
                  analysis.above_equals_tau == above ? 0.0 : 1.0});
    results.push_back({name, residual < 1e-8, residual});
  };
  check("neither quotient equals tau", witnesses.neither, false, false);
  check("below quotient only equals tau", witnesses.below_only, true, false);
  check("above quotient only equals tau", witnesses.above_only, false, true);
  check("both quotients equal tau", witnesses.both, true, true);
  check("<H> = eps1 with n1 = n2 + 1", witnesses.equal_middle_adjacent, false, true);
  check("<H> = eps1 with n1 > n2 + 1", witnesses.equal_middle_gapped, false, false);
  return results;
}

std::vector<CheckResult> verify_counterexample(int steps) {
  std::vector<CheckResult> results;
  double worst_theta = 0.0, worst_avg = 0.0, violation_margin = 1e300,
         worst_mt = 0.0;
  for (double chi : {0.2, 0.5, 0.8, 1.2, 1.5}) {
    const BuiltScenario s = build_counterexample({1.0, chi});
    const Trajectory traj = evolve_schedule(
        s.schedule, s.psi0, uniform_grid(s.tau, std::max(steps, 20000)));
    const BoundReport report = full_report(traj);
    worst_theta = std::max(worst_theta, std::abs(report.theta - M_PI));
    worst_avg = std::max(worst_avg, std::abs(report.ml_bound - M_PI));
    violation_margin = std::min(violation_margin, report.ml_bound - report.tau);
    worst_mt = std::max(worst_mt, report.mt_bound - report.tau);
  }
  record(results, "theta = pi", worst_theta, 1e-5);
  record(results, "time-averaged ML expression = pi/E", worst_avg, 1e-5);
  results.push_back({"time-averaged ML expression exceeds tau",
                     violation_margin > 0.0, -violation_margin});
  record(results, "mt bound stays below tau", worst_mt, 1e-6);
  return results;
}

std::vector<CheckResult> verify_random_periodic(int steps, std::uint64_t seed) {
  std::vector<CheckResult> results;
  double worst_bound = 0.0, worst_length = 0.0, worst_closure = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int dim = 2 + k % 5;
    const BuiltScenario s = random_periodic(dim, seed + k, 1.0);
    const Trajectory traj = evolve_schedule(
        s.schedule, s.psi0, uniform_grid(s.tau, std::max(steps, 400000)));
    worst_closure = std::max(worst_closure, closure_defect(traj));
    const BoundReport report = full_report(traj, 1e-6);
    worst_bound = std::max({worst_bound, report.ml_bound - report.tau,
                            report.mt_bound - report.tau,
                            report.bd_bound - report.tau});
    worst_length = std::max(worst_length, length_lower_bound(report.theta) -
                                              report.fs_length);
  }
  record(results, "closure defect at tau", worst_closure, 1e-6);
  record(results, "all three bounds stay below tau", worst_bound, 1e-6);
  record(results, "fs length above sqrt(theta(2pi-theta))", worst_length, 1e-6);
  return results;
}

std::vector<CheckResult> verify_invariance(int steps, std::uint64_t seed) {
  std::vector<CheckResult> results;
  const BuiltScenario s = build_qubit({1.1, 1.0, 0.0});
  const Trajectory traj =
      evolve_schedule(s.schedule, s.psi0, uniform_grid(s.tau, steps));
  const double theta = aa_phase(traj, 1e-4).theta;
  const double length = fs_length(traj);

  // The reference values must themselves track the closed forms; a coarse
  // grid fails here before the transforms are even applied.
  const double formula_residual =
      std::max(std::abs(theta - *s.theta_predicted),
               std::abs(length - M_PI * std::sin(1.1)));
  record(results, "reference trajectory matches closed forms", formula_residual,
         1e-6);

  std::mt19937_64 rng(seed + 99);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst_gauge = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a0 = uni(rng), a1 = uni(rng), a2 = uni(rng);
    Trajectory gauged = traj;
    for (size_t k = 0; k < traj.size(); ++k) {
      const double u = traj.times[k] / traj.tau();
      const double alpha = a0 + a1 * std::sin(two_pi * u) + a2 * u;
      gauged.states[k] =
          StateVector(std::polar(1.0, alpha) * traj.states[k].amplitudes());
    }
    worst_gauge = std::max(
        {worst_gauge, std::abs(aa_phase(gauged, 1e-4).theta - theta),
         std::abs(fs_length(gauged) - length)});
  }
  record(results, "gauge invariance of theta and fs length", worst_gauge, 1e-6);

  double worst_reparam = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double bend = 0.5 * std::abs(uni(rng)) + 0.1;
    Trajectory warped = traj;
    for (size_t k = 0; k < traj.size(); ++k) {
      const double u = traj.times[k] / traj.tau();
      warped.times[k] = traj.tau() * (u + bend * u * (1.0 - u)) ;
    }
    warped.schedule = nullptr;
    worst_reparam = std::max(
        {worst_reparam, std::abs(aa_phase(warped, 1e-4).theta - theta),
         std::abs(fs_length(warped) - length)});
  }
  record(results, "reparameterization invariance", worst_reparam, 1e-6);
  return results;
}

int run_verify(const std::string& suite, int steps, std::uint64_t seed) {
  std::vector<CheckResult> results;
  if (suite == "qubit-tightness") {
    results = verify_qubit_tightness(steps);
  } else if (suite == "qutrit-identities") {
    results = verify_qutrit_identities(steps);
  } else if (suite == "counterexample") {
    results = verify_counterexample(steps);
  } else if (suite == "random-periodic") {
    results = verify_random_periodic(steps, seed);
  } else if (suite == "invariance") {
    results = verify_invariance(steps, seed);
  } else {
    std::cerr << "unknown suite: " << suite << "\n";
    return kExitConfigError;
  }
  bool all_pass = true;
  for (const auto& check : results) {
    std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name
              << "  (worst residual = " << fmt12(check.worst_residual) << ")\n";
    all_pass = all_pass && check.pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic-evolution geometric phases and evolution-time bounds"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv", suite;
  int steps = 4000;
  std::uint64_t seed = 0;
  bool have_seed = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "flat key = value config file");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--steps", steps, "grid steps per period")
        ->check(CLI::Range(2, 100000000));
    cmd->add_option("--seed", seed, "seed override")
        ->each([&](const std::string&) { have_seed = true; });
  };

  auto* simulate = app.add_subcommand("simulate", "trajectory summaries");
  add_common(simulate, true);
  auto* bounds = app.add_subcommand("bounds", "full bound reports");
  add_common(bounds, true);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "qubit-tightness|qutrit-identities|counterexample|"
                     "random-periodic|invariance")
      ->required();
  add_common(verify, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      return run_verify(suite, steps, seed);
    }
    const RunConfig config = load_run_config(config_path, steps, seed, have_seed);
    const std::vector<Row> rows = evaluate_all(config);
    std::string text;
    if (simulate->parsed()) {
      text = format == "csv" ? simulate_csv(rows) : rows_json(rows, false);
    } else {
      text = format == "csv" ? bounds_csv(rows) : rows_json(rows, true);
    }
    write_output(text, out_path);
    return 0;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const PhysicsError& err) {
    std::cerr << "physics error: " << err.what() << "\n";
    return kExitPhysicsError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
