#include "qlest/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlest/combinatorics.hpp"
#include "qlest/distributions.hpp"
#include "qlest/estimators.hpp"
#include "qlest/evaluation.hpp"
#include "qlest/records.hpp"
#include "qlest/report.hpp"
#include "qlest/simulator.hpp"

namespace qlest::cli {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Defaults shared by subcommands; a config file or flags override them.
struct CliConfig {
  int slots_per_second = 2;
  HcmConfig hcm;
  std::uint64_t seed = 20140908;
};

void add_hcm_options(CLI::App& sub, HcmConfig& hcm) {
  sub.add_option("--pf", hcm.progression_factor, "Progression factor")->capture_default_str();
  sub.add_option("--k-inc", hcm.incremental_factor, "Incremental delay factor")
      ->capture_default_str();
  sub.add_option("--upstream-i", hcm.upstream_filtering, "Upstream filtering factor")
      ->capture_default_str();
  sub.add_option("--capacity", hcm.capacity_vph, "Capacity (vehicles/hour)")->capture_default_str();
  sub.add_option("--x-sat", hcm.saturation_flow, "Saturation flow (vehicles/second)")
      ->capture_default_str();
}

// --- verify-identities ------------------------------------------------------

struct VerifyArgs {
  std::int64_t r_max = 8;
  std::string out;
};

int run_verify(const VerifyArgs& args, std::ostream& out) {
  if (args.r_max < 0) throw std::invalid_argument("--r-max must be nonnegative");
  const auto results = verify_all_identities(args.r_max);
  bool ok = true;
  out << std::left << std::setw(24) << "identity" << std::right << std::setw(8) << "bound"
      << std::setw(10) << "points" << std::setw(10) << "failures" << std::setw(10) << "seconds"
      << "  result\n";
  for (const auto& r : results) {
    ok = ok && r.passed();
    out << std::left << std::setw(24) << r.name << std::right << std::setw(8) << r.r_max
        << std::setw(10) << r.points << std::setw(10) << r.failures << std::setw(10)
        << fixed(r.seconds, 3) << "  " << (r.passed() ? "PASS" : "FAIL");
    if (!r.first_failure.empty()) out << "  first failure at " << r.first_failure;
    out << '\n';
  }
  if (!args.out.empty()) {
    std::ofstream csv(args.out);
    if (!csv) throw std::runtime_error("cannot write " + args.out);
    csv << "identity,bound,points,failures,passed\n";
    for (const auto& r : results) {
      csv << r.name << ',' << r.r_max << ',' << r.points << ',' << r.failures << ','
          << (r.passed() ? "true" : "false") << '\n';
    }
  }
  return ok ? kExitOk : kExitIdentityFailure;
}

// --- pmf ----------------------------------------------------------------------

struct PmfArgs {
  std::int64_t l = 0, m = 0, t = 0, red = 0;
  bool no_time = false;
  std::optional<std::int64_t> cmax;
  bool exact = false;
};

int run_pmf(const PmfArgs& args, std::ostream& out) {
  QueuePmf pmf;
  if (args.no_time) {
    const QueueObservationNoTime obs{.l = args.l, .m = args.m, .cmax = args.cmax.value_or(2 * args.red)};
    pmf = queue_pmf_notime_vector(obs);
  } else {
    pmf = queue_pmf_time_vector({.l = args.l, .m = args.m, .t = args.t, .R = args.red});
  }
  out << "n,probability\n";
  std::int64_t n = pmf.n_min;
  for (const auto& p : pmf.probabilities) {
    out << n++ << ',' << (args.exact ? p.to_string() : general(p.to_double())) << '\n';
  }
  return kExitOk;
}

// --- estimate -----------------------------------------------------------------

struct EstimateArgs {
  std::int64_t l = 0, m = 0, t = 0, red = 0;
  std::optional<double> cycle;
  std::optional<std::int64_t> cmax;
  std::vector<std::string> estimators;
  std::optional<double> hist_l, hist_m, hist_t;
};

int run_estimate(const EstimateArgs& args, const HcmConfig& hcm, std::ostream& out,
                 std::ostream& err) {
  const QueueObservation obs{.l = args.l, .m = args.m, .t = args.t, .R = args.red};
  validate(obs);
  const double cycle_seconds = args.cycle.value_or(2.0 * static_cast<double>(args.red));
  const SignalCycle signal{cycle_seconds, static_cast<double>(args.red),
                           cycle_seconds - static_cast<double>(args.red)};
  const std::int64_t cmax = args.cmax.value_or(2 * args.red);

  ProbeHistory history;
  if (args.hist_l || args.hist_m || args.hist_t) {
    if (!(args.hist_l && args.hist_m && args.hist_t)) {
      throw std::invalid_argument("--hist-l, --hist-m and --hist-t go together");
    }
    history.record(*args.hist_l, *args.hist_m, *args.hist_t);
  }

  std::vector<EstimatorId> ids;
  for (const auto& name : args.estimators) ids.push_back(parse_estimator(name));
  if (ids.empty()) ids.assign(kAllEstimators.begin(), kAllEstimators.end());

  const double R = static_cast<double>(args.red);
  std::optional<double> lambda;
  if (obs.m > 0) {
    lambda = static_cast<double>(obs.l) / R;
  } else if (history.has_probe_data()) {
    lambda = history.mean_l() / R;
  }

  std::vector<std::string> header, row;
  for (const auto id : ids) {
    std::optional<Estimate> est;
    try {
      switch (id) {
        case EstimatorId::NP1: est = np_est1(obs); break;
        case EstimatorId::NP2: est = np_est2({.l = obs.l, .m = obs.m, .cmax = cmax}); break;
        case EstimatorId::EST1: est = param_est1(obs, history); break;
        case EstimatorId::EST2: est = param_est2(obs, history); break;
        case EstimatorId::HCM_DELAY:
          if (!lambda) throw HistoryRequired("HCM_DELAY needs an arrival rate; pass --hist-*");
          est = hcm_delay_queue(signal, *lambda, hcm);
          break;
        case EstimatorId::Q_BACK:
          if (!lambda) throw HistoryRequired("Q_BACK needs an arrival rate; pass --hist-*");
          est = q_back(*lambda, R, hcm.saturation_flow);
          break;
      }
    } catch (const HistoryRequired& e) {
      err << "warning: " << to_string(id) << ": " << e.what() << '\n';
    } catch (const Oversaturated& e) {
      err << "warning: " << to_string(id) << ": " << e.what() << '\n';
    }
    const std::string name(to_string(id));
    header.push_back(name + "_mean");
    header.push_back(name + "_var");
    row.push_back(est ? fixed(est->mean) : "NA");
    row.push_back(est && est->variance ? fixed(*est->variance) : "");
  }
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
  out << '\n';
  return kExitOk;
}

// --- simulate -----------------------------------------------------------------

struct SimulateArgs {
  std::int64_t cycles = 100;
  double p = 0.2;
  std::int64_t red = 35;
  bool platoon = false;
  double platoon_length = 4.0;
  std::optional<double> arrival_probability;
  double volume_to_capacity = 0.5;
  std::string day = "2000-01-01";
  std::string lane = "C";
  std::string start = "07:00:00";
  std::string out;
};

int run_simulate(const SimulateArgs& args, const CliConfig& cfg, std::ostream& out) {
  SimConfig sim;
  sim.slots_per_second = cfg.slots_per_second;
  sim.arrival_probability = args.arrival_probability.value_or(
      args.volume_to_capacity * cfg.hcm.saturation_flow / cfg.slots_per_second);
  sim.probe_probability = args.p;
  sim.seed = cfg.seed;
  if (args.platoon) sim.platoon = PlatoonConfig{args.platoon_length};

  CorpusLayout layout;
  layout.cycles = args.cycles;
  layout.red_seconds = args.red;
  layout.day = args.day;
  layout.lane = parse_lane(args.lane);
  layout.start_time = parse_time_of_day(args.start);
  const std::vector<CycleRecord> records = simulate_records(sim, layout);
  if (args.out.empty()) {
    write_records_csv(out, records);
  } else {
    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + args.out);
    write_records_csv(file, records);
  }
  return kExitOk;
}

// --- evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  std::string input;
  std::int64_t seeds = 1000;
  std::string out;
  std::string format = "csv";
  std::string plot_data;
  bool exclude_zero_queues = false;
  double red_fraction = 0.5;
  double cmax_per_red_second = 2.0;
  std::string zero_probe = "history";
  std::vector<std::string> estimators;
  unsigned threads = 0;
  std::optional<double> default_cycle;
};

int run_evaluate(const EvaluateArgs& args, const CliConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  IngestOptions ingest_opts;
  ingest_opts.default_cycle_seconds = args.default_cycle;
  const IngestResult ingested = ingest_csv(std::filesystem::path(args.input), ingest_opts);
  for (const auto& w : ingested.warnings) err << "warning: " << w << '\n';
  if (ingested.records.empty()) throw std::invalid_argument("no records in " + args.input);

  RunConfig run;
  run.seeds = args.seeds;
  run.base_seed = cfg.seed;
  run.red_fraction = args.red_fraction;
  run.cmax_per_red_second = args.cmax_per_red_second;
  run.exclude_zero_queues = args.exclude_zero_queues;
  run.zero_probe = parse_zero_probe_policy(args.zero_probe);
  run.hcm = cfg.hcm;
  run.threads = args.threads;
  if (!args.estimators.empty()) {
    run.estimators.clear();
    for (const auto& name : args.estimators) run.estimators.push_back(parse_estimator(name));
  }

  const Evaluation evaluation = evaluate(ingested.records, run);
  out << format_report_table(evaluation.report);
  if (!args.out.empty()) {
    if (args.format != "csv" && args.format != "json") {
      throw std::invalid_argument("--format must be csv or json");
    }
    emit_report(evaluation.report, args.format == "json" ? ReportFormat::Json : ReportFormat::Csv,
                args.out);
  }
  if (!args.plot_data.empty()) {
    std::ofstream series(args.plot_data, std::ios::binary);
    if (!series) throw std::runtime_error("cannot write " + args.plot_data);
    write_series_csv(series, evaluation, run.estimators);
  }
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Queue-length estimation from probe vehicles at signalized intersections", "qlest"};
  app.set_config("--config", "", "Key-value configuration file (TOML/INI style)");
  app.require_subcommand(1);

  CliConfig cfg;
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: " << kSeedEnv << " must be an unsigned integer\n";
      return kExitInvalid;
    }
  }
  app.add_option("--seed", cfg.seed, std::string("Default seed (also ") + kSeedEnv + ")");
  app.add_option("--slots-per-second", cfg.slots_per_second,
                 "Simulator slots per second (the estimators always use 2)")
      ->capture_default_str();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-identities", "Check the combinatorial identities exactly");
  verify_cmd->add_option("--r-max", verify.r_max, "Largest red duration in the grids")->capture_default_str();
  verify_cmd->add_option("--out", verify.out, "Also write the table as CSV");

  PmfArgs pmf;
  auto* pmf_cmd = app.add_subcommand("pmf", "Print the conditional queue-length pmf as CSV");
  pmf_cmd->add_option("--l", pmf.l, "Position of the last probe in the queue")->required();
  pmf_cmd->add_option("--m", pmf.m, "Number of probes in the queue")->required();
  pmf_cmd->add_option("--t", pmf.t, "Joining time of the last probe (s from red start)");
  pmf_cmd->add_option("--r-red", pmf.red, "Red duration (s)");
  pmf_cmd->add_flag("--no-time", pmf.no_time, "Use the model without joining time");
  pmf_cmd->add_option("--cmax", pmf.cmax, "Maximum possible arrivals (default 2R)");
  pmf_cmd->add_flag("--exact", pmf.exact, "Print probabilities as exact fractions");

  EstimateArgs est;
  HcmConfig est_hcm;
  auto* est_cmd = app.add_subcommand("estimate", "Evaluate the estimators for one observation");
  est_cmd->add_option("--l", est.l, "Position of the last probe in the queue")->required();
  est_cmd->add_option("--m", est.m, "Number of probes in the queue")->required();
  est_cmd->add_option("--t", est.t, "Joining time of the last probe (s from red start)")->required();
  est_cmd->add_option("--red", est.red, "Red duration (s)")->required();
  est_cmd->add_option("--cycle", est.cycle, "Cycle length (s, default 2 x red)");
  est_cmd->add_option("--cmax", est.cmax, "Maximum possible arrivals for NP2 (default 2R)");
  est_cmd->add_option("--estimator", est.estimators, "Estimators to report (default all)");
  est_cmd->add_option("--hist-l", est.hist_l, "Running mean of l over previous cycles");
  est_cmd->add_option("--hist-m", est.hist_m, "Running mean of m over previous cycles");
  est_cmd->add_option("--hist-t", est.hist_t, "Running mean of t over previous cycles");
  add_hcm_options(*est_cmd, est_hcm);

  SimulateArgs sim;
  std::optional<std::uint64_t> sim_seed;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate synthetic cycle records");
  sim_cmd->add_option("--cycles", sim.cycles, "Number of cycles")->capture_default_str();
  sim_cmd->add_option("--p", sim.p, "Probe (market penetration) probability")->capture_default_str();
  sim_cmd->add_option("--red", sim.red, "Red duration (s); cycle is twice this")->capture_default_str();
  sim_cmd->add_flag("--platoon", sim.platoon, "Platoon arrivals instead of independent slots");
  sim_cmd->add_option("--platoon-length", sim.platoon_length, "Mean platoon length (slots)")
      ->capture_default_str();
  sim_cmd->add_option("--arrival-prob", sim.arrival_probability, "Arrival probability per slot");
  sim_cmd->add_option("--vc", sim.volume_to_capacity,
                      "Volume-to-capacity ratio used when --arrival-prob is absent")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, std::string("Seed (default from ") + kSeedEnv + ")");
  sim_cmd->add_option("--day", sim.day, "Day label")->capture_default_str();
  sim_cmd->add_option("--lane", sim.lane, "Lane: L, C or R")->capture_default_str();
  sim_cmd->add_option("--start", sim.start, "Time of the first cycle (hh:mm:ss)")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Output CSV (default stdout)");

  EvaluateArgs eval;
  HcmConfig eval_hcm;
  std::optional<std::uint64_t> eval_seed;
  auto* eval_cmd = app.add_subcommand("evaluate", "Compare the estimators on cycle records");
  eval_cmd->add_option("--input", eval.input, "Cycle records CSV")->required();
  eval_cmd->add_option("--seeds", eval.seeds, "Number of random seeds")->capture_default_str();
  eval_cmd->add_option("--seed", eval_seed, std::string("Base seed (default from ") + kSeedEnv + ")");
  eval_cmd->add_option("--out", eval.out, "Report file");
  eval_cmd->add_option("--format", eval.format, "Report format: csv or json")->capture_default_str();
  eval_cmd->add_option("--plot-data", eval.plot_data, "Per-cycle series CSV");
  eval_cmd->add_flag("--exclude-zero-queues", eval.exclude_zero_queues,
                     "Drop cycles whose true queue is zero");
  eval_cmd->add_option("--red-fraction", eval.red_fraction, "Red share of the cycle")
      ->capture_default_str();
  eval_cmd->add_option("--cmax-factor", eval.cmax_per_red_second,
                       "cmax = round(R x factor) for NP2")
      ->capture_default_str();
  eval_cmd->add_option("--zero-probe", eval.zero_probe,
                       "NP estimators on cycles without probes: history or prior")
      ->capture_default_str();
  eval_cmd->add_option("--estimator", eval.estimators, "Estimators to run (default all)");
  eval_cmd->add_option("--threads", eval.threads, "Worker threads (0: all cores)");
  eval_cmd->add_option("--default-cycle", eval.default_cycle,
                       "Cycle length for a lane with a single record");
  add_hcm_options(*eval_cmd, eval_hcm);

  if (argc <= 1) {
    out << app.help();
    return kExitInvalid;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (verify_cmd->parsed()) return run_verify(verify, out);
    if (pmf_cmd->parsed()) {
      if (!pmf.no_time && (pmf_cmd->count("--t") == 0 || pmf_cmd->count("--r-red") == 0)) {
        throw std::invalid_argument("pmf needs --t and --r-red unless --no-time is given");
      }
      if (pmf.no_time && !pmf.cmax && pmf_cmd->count("--r-red") == 0) {
        throw std::invalid_argument("pmf --no-time needs --cmax or --r-red");
      }
      return run_pmf(pmf, out);
    }
    if (est_cmd->parsed()) {
      validate(est_hcm);
      return run_estimate(est, est_hcm, out, err);
    }
    if (sim_cmd->parsed()) {
      if (sim_seed) cfg.seed = *sim_seed;
      return run_simulate(sim, cfg, out);
    }
    if (eval_cmd->parsed()) {
      if (eval_seed) cfg.seed = *eval_seed;
      cfg.hcm = eval_hcm;
      return run_evaluate(eval, cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  out << app.help();
  return kExitInvalid;
}

}  // namespace qlest::cli
