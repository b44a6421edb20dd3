#include "qlest/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qlest/simulator.hpp"

namespace qlest {

namespace {

using GroupKey = std::pair<std::string, Lane>;

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::int64_t red_seconds(double cycle_seconds, const RunConfig& cfg) {
  return std::max<std::int64_t>(1, std::llround(cycle_seconds * cfg.red_fraction));
}

// History-derived arrival rate for cycles without probes; zero before any
// probe has been seen.
double lambda_estimate(const CycleContext& ctx) {
  const auto& obs = ctx.observation;
  const double R = static_cast<double>(obs.R);
  if (obs.m > 0) return static_cast<double>(obs.l) / R;
  if (ctx.history->has_probe_data()) return ctx.history->mean_l() / R;
  return 0.0;
}

}  // namespace

std::string_view to_string(ZeroProbePolicy policy) {
  return policy == ZeroProbePolicy::History ? "history" : "prior";
}

ZeroProbePolicy parse_zero_probe_policy(std::string_view text) {
  if (text == "history") return ZeroProbePolicy::History;
  if (text == "prior") return ZeroProbePolicy::Prior;
  throw std::invalid_argument("zero-probe policy must be 'history' or 'prior'");
}

void validate(const RunConfig& cfg) {
  if (cfg.seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  if (!(cfg.red_fraction > 0.0 && cfg.red_fraction < 1.0)) {
    throw std::invalid_argument("red fraction must be in (0, 1)");
  }
  if (!(cfg.cmax_per_red_second > 0.0)) {
    throw std::invalid_argument("cmax per red second must be positive");
  }
  if (cfg.estimators.empty()) throw std::invalid_argument("no estimators configured");
  validate(cfg.hcm);
}

std::map<std::string, std::string> describe(const RunConfig& cfg) {
  std::string estimators;
  for (const auto id : cfg.estimators) {
    if (!estimators.empty()) estimators += ' ';
    estimators += to_string(id);
  }
  return {
      {"seeds", std::to_string(cfg.seeds)},
      {"base_seed", std::to_string(cfg.base_seed)},
      {"red_rule", "R = round(C * " + format_double(cfg.red_fraction) + ")"},
      {"cmax_rule", "cmax = round(R * " + format_double(cfg.cmax_per_red_second) + ")"},
      {"estimators", estimators},
      {"exclude_zero_queues", cfg.exclude_zero_queues ? "true" : "false"},
      {"zero_probe_policy", std::string(to_string(cfg.zero_probe))},
      {"lambda_policy", "l/R when m > 0, running mean l/R otherwise, 0 before any probe"},
      {"history_scope", "per day and lane, all previous cycles"},
      {"no_history_estimate", "0"},
      {"q_back_cap", "cmax"},
      {"hcm", "PF=" + format_double(cfg.hcm.progression_factor) +
                  " k=" + format_double(cfg.hcm.incremental_factor) +
                  " I=" + format_double(cfg.hcm.upstream_filtering) +
                  " c=" + format_double(cfg.hcm.capacity_vph) +
                  " x_sat=" + format_double(cfg.hcm.saturation_flow) +
                  " d3=" + format_double(cfg.hcm.initial_queue_delay) + " T=C/3600"},
  };
}

double estimate_cycle(EstimatorId id, const CycleContext& ctx, const RunConfig& cfg) {
  const auto& obs = ctx.observation;
  const ProbeHistory& history = *ctx.history;
  const bool probes = obs.m > 0;
  const double R = static_cast<double>(obs.R);

  switch (id) {
    case EstimatorId::NP1:
      if (probes || cfg.zero_probe == ZeroProbePolicy::Prior) return np_est1(obs).mean;
      if (!history.has_probe_data()) return 0.0;
      return np_est1_at(history.mean_l(), history.mean_m(), history.mean_t(), R).mean;
    case EstimatorId::NP2:
      if (probes || cfg.zero_probe == ZeroProbePolicy::Prior) {
        return np_est2({.l = obs.l, .m = obs.m, .cmax = ctx.cmax}).mean;
      }
      if (!history.has_probe_data()) return 0.0;
      return np_est2_at(std::min(history.mean_l(), static_cast<double>(ctx.cmax)),
                        std::min(history.mean_m(), static_cast<double>(ctx.cmax)),
                        static_cast<double>(ctx.cmax))
          .mean;
    case EstimatorId::EST1:
      if (!probes && !history.has_probe_data()) return 0.0;
      return param_est1(obs, history).mean;
    case EstimatorId::EST2:
      if (!probes && !history.has_probe_data()) return 0.0;
      return param_est2(obs, history).mean;
    case EstimatorId::HCM_DELAY:
      return hcm_delay_queue(ctx.signal, lambda_estimate(ctx), cfg.hcm).mean;
    case EstimatorId::Q_BACK:
      // Capped at cmax; the service-time term diverges as lambda nears x_sat.
      try {
        return std::min(q_back(lambda_estimate(ctx), R, cfg.hcm.saturation_flow).mean,
                        static_cast<double>(ctx.cmax));
      } catch (const Oversaturated&) {
        return static_cast<double>(ctx.cmax);
      }
  }
  throw std::logic_error("unhandled estimator");
}

double SeedCell::rmse() const {
  return count == 0 ? 0.0 : std::sqrt(sse / static_cast<double>(count));
}

std::vector<const CycleRecord*> evaluated_records(const std::vector<CycleRecord>& records,
                                                  const RunConfig& cfg) {
  std::vector<const CycleRecord*> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (cfg.exclude_zero_queues && r.true_queue == 0) continue;
    out.push_back(&r);
  }
  return out;
}

SeedOutcome evaluate_seed(const std::vector<CycleRecord>& records, const RunConfig& cfg,
                          std::int64_t seed_index) {
  const auto kept = evaluated_records(records, cfg);
  const std::size_t k = cfg.estimators.size();
  SeedOutcome out;
  out.estimates.reserve(kept.size());
  std::map<GroupKey, ProbeHistory> histories;

  for (const CycleRecord* rec : kept) {
    if (rec->probe_count > rec->true_queue || !(rec->cycle_seconds > 0.0)) {
      throw std::invalid_argument("record violates probe_count <= true_queue or cycle_seconds > 0");
    }
    // Substream per (seed, record position in the input): appending records
    // leaves earlier draws untouched.
    const auto position = static_cast<std::uint64_t>(rec - records.data());
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.base_seed),
                      static_cast<std::uint32_t>(cfg.base_seed >> 32),
                      static_cast<std::uint32_t>(seed_index),
                      static_cast<std::uint32_t>(position),
                      static_cast<std::uint32_t>(position >> 32)};
    std::mt19937_64 rng(seq);

    const std::int64_t R = red_seconds(rec->cycle_seconds, cfg);
    const ProtocolSample sample =
        protocol_sample(rec->true_queue, rec->probe_count, rec->cycle_seconds, R, rng);

    const GroupKey key{rec->day, rec->lane};
    ProbeHistory& history = histories[key];
    CycleContext ctx;
    ctx.record = rec;
    ctx.observation = rec->probe_count > 0
                          ? QueueObservation{.l = sample.l, .m = rec->probe_count, .t = sample.t, .R = R}
                          : QueueObservation{.l = 0, .m = 0, .t = 0, .R = R};
    ctx.cmax = std::max<std::int64_t>(ctx.observation.l,
                                      std::llround(static_cast<double>(R) * cfg.cmax_per_red_second));
    ctx.signal = {rec->cycle_seconds, static_cast<double>(R), rec->cycle_seconds - static_cast<double>(R)};
    ctx.history = &history;

    auto& cells = out.cells[key];
    cells.resize(k);
    std::vector<double> row(k);
    for (std::size_t e = 0; e < k; ++e) {
      const double estimate = cfg.custom_estimator ? cfg.custom_estimator(cfg.estimators[e], ctx)
                                                   : estimate_cycle(cfg.estimators[e], ctx, cfg);
      const double error = estimate - static_cast<double>(rec->true_queue);
      cells[e].sse += error * error;
      cells[e].error_sum += error;
      ++cells[e].count;
      row[e] = estimate;
    }
    out.estimates.push_back(std::move(row));
    history.record(ctx.observation);
  }
  return out;
}

double average_penetration(const std::vector<CycleRecord>& records, const std::string& day,
                           Lane lane) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& r : records) {
    if (r.day != day || r.lane != lane || r.true_queue == 0) continue;
    sum += static_cast<double>(r.probe_count) / static_cast<double>(r.true_queue);
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

Evaluation evaluate(const std::vector<CycleRecord>& records, const RunConfig& cfg) {
  validate(cfg);
  if (records.empty()) throw std::invalid_argument("no records to evaluate");

  const auto seeds = static_cast<std::size_t>(cfg.seeds);
  std::vector<SeedOutcome> outcomes(seeds);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, seeds));
  {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t s = w; s < seeds; s += workers) {
            outcomes[s] = evaluate_seed(records, cfg, static_cast<std::int64_t>(s));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Reduction in seed order keeps the floating sums reproducible.
  const std::size_t k = cfg.estimators.size();
  struct Totals {
    double rmse_sum = 0.0;
    double error_sum = 0.0;
    std::int64_t count = 0;
    std::int64_t per_seed = 0;
  };
  std::map<GroupKey, std::vector<Totals>> totals;
  for (const auto& outcome : outcomes) {
    for (const auto& [key, cells] : outcome.cells) {
      auto& t = totals[key];
      t.resize(k);
      for (std::size_t e = 0; e < k; ++e) {
        t[e].rmse_sum += cells[e].rmse();
        t[e].error_sum += cells[e].error_sum;
        t[e].count += cells[e].count;
        t[e].per_seed = cells[e].count;
      }
    }
  }

  Evaluation result;
  result.report.metadata = describe(cfg);
  for (const auto& [key, t] : totals) {  // std::map orders by day, then lane
    const double avg_p = average_penetration(records, key.first, key.second);
    for (std::size_t e = 0; e < k; ++e) {
      EvalCell cell;
      cell.day = key.first;
      cell.lane = key.second;
      cell.estimator = cfg.estimators[e];
      cell.rmse = t[e].rmse_sum / static_cast<double>(seeds);
      cell.mean_error = t[e].count ? t[e].error_sum / static_cast<double>(t[e].count) : 0.0;
      cell.n_obs = t[e].per_seed;
      cell.avg_p = avg_p;
      result.report.cells.push_back(std::move(cell));
    }
  }

  const auto kept = evaluated_records(records, cfg);
  result.series.resize(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    result.series[i].record = kept[i];
    result.series[i].mean_estimates.assign(k, 0.0);
    for (const auto& outcome : outcomes) {
      for (std::size_t e = 0; e < k; ++e) {
        result.series[i].mean_estimates[e] += outcome.estimates[i][e];
      }
    }
    for (auto& v : result.series[i].mean_estimates) v /= static_cast<double>(seeds);
  }
  return result;
}

EvalReport run_evaluation(const std::vector<CycleRecord>& records, const RunConfig& cfg) {
  return evaluate(records, cfg).report;
}

}  // namespace qlest
