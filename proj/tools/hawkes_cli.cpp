// Command line front end: scenario in, CSV artifacts + a structured report
// out. Exit codes: 0 success, 2 validation/configuration problems, 3
// numerical failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hawkes/analytics.hpp"
#include "hawkes/deviations.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/event_log.hpp"
#include "hawkes/microstructure.hpp"
#include "hawkes/ruin.hpp"
#include "hawkes/scenario.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"

namespace {

using namespace hawkes;

constexpr const char* kOutDirEnv = "HAWKES_OUT_DIR";

struct Options {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<double> horizon;
  std::optional<double> tol;
  std::string out_dir;
  std::string curve;
  std::string tau_grid;
  std::optional<double> theta;
};

struct CurveSpec {
  std::string var;
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

// "x:0.5:4:50" -> {var, lo, hi, n}
CurveSpec parse_curve(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4)
    throw validation_error("curve spec must look like name:lo:hi:n, got \"" +
                           text + "\"");
  CurveSpec spec;
  spec.var = parts[0];
  try {
    spec.lo = std::stod(parts[1]);
    spec.hi = std::stod(parts[2]);
    spec.n = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw validation_error("curve spec has non-numeric bounds: \"" + text +
                           "\"");
  }
  if (spec.n < 1)
    throw validation_error("curve spec needs at least one point");
  if (spec.hi < spec.lo)
    throw validation_error("curve spec has hi < lo");
  return spec;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  if (n == 1) {
    xs[0] = lo;
    return xs;
  }
  const double step = (hi - lo) / (n - 1);
  for (int k = 0; k < n; ++k) xs[static_cast<std::size_t>(k)] = lo + step * k;
  xs.back() = hi;
  return xs;
}

// "lo:hi:n" -> n log-spaced points
std::vector<double> parse_tau_grid(const std::string& text) {
  const CurveSpec spec = parse_curve("tau:" + text);
  if (spec.lo <= 0.0)
    throw validation_error("tau grid needs lo > 0 (log spacing)");
  if (spec.n == 1) return {spec.lo};
  std::vector<double> taus = linspace(std::log(spec.lo), std::log(spec.hi),
                                      spec.n);
  for (double& t : taus) t = std::exp(t);
  taus.back() = spec.hi;
  return taus;
}

// Precedence: --out flag, then the scenario block, then $HAWKES_OUT_DIR,
// then the working directory.
std::string resolve_out_dir(const Options& opt, const Scenario& s) {
  std::string dir = opt.out_dir;
  if (dir.empty()) dir = s.output_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv(kOutDirEnv)) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw config_error("cannot create output directory " + dir + ": " +
                       ec.message());
  return dir;
}

Scenario load_with_overrides(const Options& opt) {
  std::vector<std::string> warnings;
  Scenario s = load_scenario(opt.scenario_path, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
  if (opt.seed) s.seed = *opt.seed;
  if (opt.reps) {
    if (*opt.reps < 1) throw validation_error("--reps must be positive");
    s.replications = *opt.reps;
  }
  if (opt.horizon) s.horizon = *opt.horizon;
  if (opt.tol) {
    if (*opt.tol <= 0.0 || *opt.tol >= 1.0)
      throw validation_error("--tol must lie in (0, 1)");
    s.series_tol = *opt.tol;
  }
  return s;
}

void require_finite_horizon(const Scenario& s) {
  if (!(s.horizon > 0.0) || !std::isfinite(s.horizon))
    throw validation_error("this subcommand needs a finite positive horizon");
}

std::string fixed9(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(9) << x;
  return os.str();
}

std::string curve_csv(const std::string& header,
                      const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  os << header << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      os << fixed9(columns[c][r]);
    }
    os << '\n';
  }
  return os.str();
}

void emit(Report& report, const std::string& out_dir,
          const std::string& name, const std::string& content) {
  write_file_atomic(out_dir + "/" + name, content);
  report.files.push_back(name);
}

// ---------------------------------------------------------------------------

Report run_simulate(const Options& opt) {
  Scenario s = load_with_overrides(opt);
  require_finite_horizon(s);
  const std::string out_dir = resolve_out_dir(opt, s);
  const KernelSequence seq = s.sequence();

  Report report;
  report.subcommand = "simulate";
  report.scenario = s;

  std::vector<double> totals;
  double worst_bound = 0.0;
  for (int r = 0; r < s.replications; ++r) {
    const EventLog log = simulate_branching(
        seq, s.horizon, RngStream{s.seed, static_cast<std::uint64_t>(r)},
        s.series_tol);
    totals.push_back(static_cast<double>(log.count()));
    worst_bound = std::max(worst_bound, log.truncation_bound);
    std::ostringstream os;
    log.write_csv(os);
    emit(report, out_dir, "events_" + std::to_string(r) + ".csv", os.str());
  }

  double total = 0.0;
  for (double t : totals) total += t;
  report.add("events_total", total, 0.0, "exact");
  if (s.replications > 1) {
    const double mu = stats::mean(totals);
    report.add("events_mean", mu,
               std::sqrt(stats::sample_variance(totals) / totals.size()),
               "mc_se");
  } else {
    report.add("events_mean", total, 0.0, "exact");
  }
  report.add("generation_truncation_bound", worst_bound, 0.0, "bound");
  return report;
}

Report run_moments(const Options& opt) {
  Scenario s = load_with_overrides(opt);
  resolve_out_dir(opt, s);  // validated even though nothing tabular is written
  const KernelSequence seq = s.sequence();
  const LimitConstants lc = limit_constants(seq, s.series_tol);

  Report report;
  report.subcommand = "moments";
  report.scenario = s;
  report.add("m", lc.m, lc.truncation_error_m, "truncation");
  report.add("sigma2", lc.sigma2, lc.truncation_error_sigma2, "truncation");
  report.add("rho", seq.rho(), 0.0, "exact");
  if (s.partition) {
    const std::vector<double> rates =
        partition_lln(seq, *s.partition, s.series_tol);
    for (std::size_t k = 0; k < rates.size(); ++k)
      report.add("class" + std::to_string(k + 1) + "_rate", rates[k],
                 lc.truncation_error_m, "truncation");
  }
  return report;
}

Report run_ldp(const Options& opt) {
  Scenario s = load_with_overrides(opt);
  const std::string out_dir = resolve_out_dir(opt, s);
  const CumulantModel model(s.sequence(), s.series_tol, s.divergence_cap);
  const CriticalTheta tc = model.theta_c();

  Report report;
  report.subcommand = "ldp";
  report.scenario = s;
  report.add("theta_c", tc.value, model.tol(),
             tc.at_cap ? "bound" : "truncation");
  report.add("gamma_prime_at_zero", model.gamma_prime(0.0), model.tol(),
             "truncation");

  if (opt.theta) {
    const double g = model.gamma(*opt.theta);
    if (!std::isfinite(g))
      throw numerical_error("gamma(theta) diverges at theta = " +
                            std::to_string(*opt.theta) +
                            "; the finite domain ends at theta_c = " +
                            std::to_string(tc.value));
    report.add("gamma_at_theta", g, model.tol(), "truncation");
    report.add("theta", *opt.theta, 0.0, "exact");
  }

  if (!opt.curve.empty()) {
    const CurveSpec spec = parse_curve(opt.curve);
    const std::vector<double> xs = linspace(spec.lo, spec.hi, spec.n);
    std::vector<double> rates;
    rates.reserve(xs.size());
    for (double x : xs) rates.push_back(rate_I(model, x));
    emit(report, out_dir, "ldp_curve.csv",
         curve_csv(spec.var + ",rate", {xs, rates}));
  }
  return report;
}

Report run_mdp_check(const Options& opt) {
  Scenario s = load_with_overrides(opt);
  require_finite_horizon(s);
  const std::string out_dir = resolve_out_dir(opt, s);
  const KernelSequence seq = s.sequence();
  const LimitConstants lc = limit_constants(seq, s.series_tol);

  const double T = s.horizon;
  const double a = std::pow(T, 0.75);
  const std::vector<ReplicateSummary> runs =
      replicate(seq, T, s.series_tol, s.seed, s.replications);

  const CurveSpec spec =
      parse_curve(opt.curve.empty() ? "x:0.5:2:7" : opt.curve);
  const std::vector<double> xs = linspace(spec.lo, spec.hi, spec.n);
  std::vector<double> theory, empirical;
  for (double x : xs) {
    theory.push_back(rate_J(lc, x));
    std::size_t hits = 0;
    for (const ReplicateSummary& run : runs)
      if ((static_cast<double>(run.total) - lc.m * T) / a >= x) ++hits;
    const double freq = static_cast<double>(hits) / runs.size();
    empirical.push_back(hits == 0
                            ? std::numeric_limits<double>::quiet_NaN()
                            : -(T / (a * a)) * std::log(freq));
  }

  Report report;
  report.subcommand = "mdp-check";
  report.scenario = s;
  report.add("m", lc.m, lc.truncation_error_m, "truncation");
  report.add("sigma2", lc.sigma2, lc.truncation_error_sigma2, "truncation");
  report.add("scaling_a_of_T", a, 0.0, "exact");
  emit(report, out_dir, "mdp_curve.csv",
       curve_csv(spec.var + ",rate,empirical", {xs, theory, empirical}));
  return report;
}

Report run_equilibrium(const Options& opt) {
  Scenario s = load_with_overrides(opt);
  require_finite_horizon(s);
  const std::string out_dir = resolve_out_dir(opt, s);
  const KernelSequence seq = s.sequence();

  const CurveSpec spec =
      parse_curve(opt.curve.empty() ? "s:1:10:10" : opt.curve);
  const std::vector<double> ss = linspace(spec.lo, spec.hi, spec.n);
  std::vector<double> bounds;
  double strong_cap = 0.0;
  bool cap_resolved = true;
  for (double age : ss) {
    const EquilibriumBound b = equilibrium_bound(seq, age, s.horizon,
                                                 s.grid_dt);
    bounds.push_back(b.value);
    strong_cap = b.strong_cap;
    cap_resolved = cap_resolved && b.cap_resolved;
  }

  Report report;
  report.subcommand = "equilibrium";
  report.scenario = s;
  report.add("strong_cap", strong_cap, 0.0, "bound");
  report.add("cap_resolved", cap_resolved ? 1.0 : 0.0, 0.0, "exact");
  emit(report, out_dir, "equilibrium_curve.csv",
       curve_csv(spec.var + ",bound", {ss, bounds}));
  return report;
}

Report run_microstructure(const Options& opt) {
  Scenario s = load_with_overrides(opt);
  require_finite_horizon(s);
  const std::string out_dir = resolve_out_dir(opt, s);
  const KernelSequence seq = s.sequence();
  if (!s.partition)
    throw validation_error(
        "microstructure needs a partition block in the scenario");
  const PartitionSpec& part = *s.partition;

  const std::vector<double> taus =
      parse_tau_grid(opt.tau_grid.empty() ? "0.05:5:12" : opt.tau_grid);
  const double tau_max = taus.back();

  // Depth: enough generations that the discarded mean rate stays below the
  // table tolerance (relative to the background), capped for memory.
  const double table_tol = opt.tol.value_or(1e-6);
  const double rho = seq.rho();
  int n_max = 2;
  if (rho > 0.0) {
    const double target = table_tol * (1.0 - rho);
    n_max = static_cast<int>(
        std::ceil(std::log(target) / std::log(rho))) - 1;
    n_max = std::clamp(n_max, 2, 16);
  }
  const double L =
      std::max(2.0 * seq.max_truncation_length(), 2.2 * tau_max);
  const CovarianceTable table = covariance_table(seq, n_max, s.grid_dt, L);

  std::vector<PricePath> paths;
  paths.reserve(static_cast<std::size_t>(s.replications));
  for (int r = 0; r < s.replications; ++r) {
    EventLog log = simulate_warm(
        seq, s.horizon, RngStream{s.seed, static_cast<std::uint64_t>(r)},
        s.series_tol);
    paths.emplace_back(std::move(log), part, seq.extension());
  }

  Report report;
  report.subcommand = "microstructure";
  report.scenario = s;
  report.add("table_depth", static_cast<double>(n_max), 0.0, "exact");
  report.add("rate_tail_bound", table.rate_tail_bound(), 0.0, "bound");
  report.add("pair_truncation_bound", table.truncation_bound(), 0.0, "bound");

  {
    const std::vector<CurvePoint> curve = signature_plot(paths, taus);
    std::vector<double> analytic;
    analytic.reserve(taus.size());
    for (double tau : taus)
      analytic.push_back(analytic_signature(table, part, tau));
    std::ostringstream os;
    write_curve_csv(os, curve, analytic);
    emit(report, out_dir, "signature.csv", os.str());
  }
  if (part.d == 4) {
    const std::vector<CurvePoint> curve = epps_curve(paths, taus);
    std::vector<double> analytic;
    analytic.reserve(taus.size());
    for (double tau : taus)
      analytic.push_back(analytic_correlation(table, part, tau));
    std::ostringstream os;
    write_curve_csv(os, curve, analytic);
    emit(report, out_dir, "epps.csv", os.str());
  }
  return report;
}

Report run_ruin(const Options& opt) {
  Scenario s = load_with_overrides(opt);
  const std::string out_dir = resolve_out_dir(opt, s);
  if (!s.claim_law)
    throw validation_error("ruin needs a claims block in the scenario");
  const RiskModel model(s.reserve, s.premium, *s.claim_law, s.sequence());

  Report report;
  report.subcommand = "ruin";
  report.scenario = s;
  report.add("arrival_rate", model.arrival_rate(), 0.0, "truncation");
  report.add("claim_load", model.claim_load(), 0.0, "truncation");
  report.add("net_profit", model.net_profit() ? 1.0 : 0.0, 0.0, "exact");

  const bool light = s.claim_law->light_tailed();
  double theta_dagger = 0.0;
  if (light && model.net_profit()) {
    const LundbergSolution sol = lundberg_exponent(model);
    theta_dagger = sol.theta_dagger;
    report.add("theta_dagger", sol.theta_dagger, s.series_tol, "truncation");
    report.add("knee_z", ruin_knee(model), s.series_tol, "truncation");
  }

  const RuinEstimate est =
      simulate_ruin(model, s.horizon, s.replications, s.seed);
  report.add("psi", est.psi, est.se, "mc_se");
  report.add("residual_bound", est.residual_bound, 0.0, "bound");
  if (std::isfinite(est.z)) report.add("z", est.z, 0.0, "exact");
  if (light && model.net_profit() && std::isfinite(est.z) && est.z > 0.0)
    report.add("decay_rate_at_z", finite_horizon_rate(model, est.z),
               s.series_tol, "truncation");
  if (!light) {
    const HeavyTailAsymptote tail = heavy_tail_asymptote(model, s.horizon);
    report.add("heavy_constant", tail.constant, 0.0, "truncation");
    report.add("asymptote_at_reserve", tail(s.reserve), 0.0, "truncation");
  }

  if (!opt.curve.empty()) {
    const CurveSpec spec = parse_curve(opt.curve);
    const std::vector<double> us = linspace(spec.lo, spec.hi, spec.n);
    std::vector<double> values;
    values.reserve(us.size());
    if (!light) {
      const HeavyTailAsymptote tail = heavy_tail_asymptote(model, s.horizon);
      for (double u : us) values.push_back(tail(u));
      emit(report, out_dir, "ruin_curve.csv",
           curve_csv(spec.var + ",asymptote", {us, values}));
    } else {
      if (!model.net_profit())
        throw validation_error(
            "the exponential bound curve needs the net profit condition");
      for (double u : us) values.push_back(std::exp(-theta_dagger * u));
      emit(report, out_dir, "ruin_curve.csv",
           curve_csv(spec.var + ",bound", {us, values}));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

void attach_common(CLI::App* cmd, Options* opt) {
  cmd->add_option("--scenario", opt->scenario_path, "scenario JSON file")
      ->required();
  cmd->add_option("--seed", opt->seed, "override the scenario seed");
  cmd->add_option("--reps", opt->reps, "override the replication count");
  cmd->add_option("--out", opt->out_dir,
                  "output directory (default: scenario block, then $" +
                      std::string(kOutDirEnv) + ", then .)");
  cmd->add_option("--tol", opt->tol, "override the series tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "simulation and analytics for self-exciting counting processes with "
      "generation-dependent kernels"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "draw replicated event logs and write them as CSV");
  attach_common(c_sim, &opt);
  c_sim->add_option("--horizon", opt.horizon, "override the horizon");

  CLI::App* c_mom = app.add_subcommand(
      "moments", "long-run mean and variance constants of the count");
  attach_common(c_mom, &opt);

  CLI::App* c_ldp = app.add_subcommand(
      "ldp", "cumulant diagnostics and the large-deviation rate curve");
  attach_common(c_ldp, &opt);
  c_ldp->add_option("--theta", opt.theta, "evaluate the cumulant here");
  c_ldp->add_option("--curve", opt.curve,
                    "rate curve spec name:lo:hi:n (e.g. x:0.5:4:50)");

  CLI::App* c_mdp = app.add_subcommand(
      "mdp-check", "moderate-deviation tail frequencies against x^2/(2 sigma^2)");
  attach_common(c_mdp, &opt);
  c_mdp->add_option("--horizon", opt.horizon, "override the horizon");
  c_mdp->add_option("--curve", opt.curve, "x grid spec name:lo:hi:n");

  CLI::App* c_eq = app.add_subcommand(
      "equilibrium", "bound on the influence of pre-window immigrants");
  attach_common(c_eq, &opt);
  c_eq->add_option("--horizon", opt.horizon, "override the horizon");
  c_eq->add_option("--curve", opt.curve, "age grid spec name:lo:hi:n");

  CLI::App* c_mic = app.add_subcommand(
      "microstructure",
      "signature plot and cross-correlation of the two price legs");
  attach_common(c_mic, &opt);
  c_mic->add_option("--horizon", opt.horizon, "override the horizon");
  c_mic->add_option("--tau-grid", opt.tau_grid,
                    "window grid lo:hi:n, log spaced (default 0.05:5:12)");

  CLI::App* c_ruin = app.add_subcommand(
      "ruin", "ruin frequency with the matching analytic decay constants");
  attach_common(c_ruin, &opt);
  c_ruin->add_option("--horizon", opt.horizon,
                     "override the horizon (inf allowed for light tails)");
  c_ruin->add_option("--curve", opt.curve, "reserve grid spec name:lo:hi:n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    Report report;
    if (c_sim->parsed()) report = run_simulate(opt);
    else if (c_mom->parsed()) report = run_moments(opt);
    else if (c_ldp->parsed()) report = run_ldp(opt);
    else if (c_mdp->parsed()) report = run_mdp_check(opt);
    else if (c_eq->parsed()) report = run_equilibrium(opt);
    else if (c_mic->parsed()) report = run_microstructure(opt);
    else report = run_ruin(opt);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    const std::string out_dir = resolve_out_dir(opt, report.scenario);
    report.write(out_dir + "/" + report.subcommand + "_report.json");
    std::cout << report.to_json() << '\n';
    return 0;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
