#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qlest/distributions.hpp"
#include "qlest/estimators.hpp"
#include "qlest/records.hpp"

namespace qlest {

/// What the time-based and location-based nonparametric estimators do on a
/// cycle without probes.
enum class ZeroProbePolicy {
  History,  // evaluate the closed form at the lane's running probe means
  Prior,    // use the l = m = t = 0 observation as is
};

std::string_view to_string(ZeroProbePolicy policy);
ZeroProbePolicy parse_zero_probe_policy(std::string_view text);

/// Everything an estimator sees for one cycle of one seed.
struct CycleContext {
  const CycleRecord* record = nullptr;
  QueueObservation observation;  // (0, 0, 0, R) when the cycle has no probes
  std::int64_t cmax = 0;
  SignalCycle signal;
  const ProbeHistory* history = nullptr;  // previous cycles of this day and lane
};

struct RunConfig {
  std::int64_t seeds = 1000;
  std::uint64_t base_seed = 20140908;
  double red_fraction = 0.5;       // R = round(C * red_fraction), at least 1 s
  double cmax_per_red_second = 2.0;  // cmax = round(R * this), i.e. 2R slots
  std::vector<EstimatorId> estimators{kAllEstimators.begin(), kAllEstimators.end()};
  bool exclude_zero_queues = false;
  ZeroProbePolicy zero_probe = ZeroProbePolicy::History;
  HcmConfig hcm;
  unsigned threads = 0;  // 0: hardware concurrency

  /// Replaces the built-in estimators when set (used for harness checks).
  std::function<double(EstimatorId, const CycleContext&)> custom_estimator;
};

void validate(const RunConfig& cfg);

/// Metadata describing how a run was configured, written alongside reports.
std::map<std::string, std::string> describe(const RunConfig& cfg);

/// One estimator applied to one cycle under the built-in policies.
double estimate_cycle(EstimatorId id, const CycleContext& ctx, const RunConfig& cfg);

struct EvalCell {
  std::string day;
  Lane lane = Lane::Center;
  EstimatorId estimator = EstimatorId::NP1;
  double rmse = 0.0;        // per-seed RMSE averaged over seeds
  double mean_error = 0.0;  // estimate minus truth, over all seeds and cycles
  std::int64_t n_obs = 0;   // cycles per seed
  double avg_p = 0.0;       // mean of m / QL over cycles with QL > 0

  friend bool operator==(const EvalCell&, const EvalCell&) = default;
};

struct EvalReport {
  std::map<std::string, std::string> metadata;
  std::vector<EvalCell> cells;  // sorted by day, lane, then configured estimator order

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Squared-error accumulators of one seed for one (day, lane, estimator).
struct SeedCell {
  double sse = 0.0;
  double error_sum = 0.0;
  std::int64_t count = 0;

  double rmse() const;
};

/// Per-cycle series for plotting: estimates averaged over seeds. record
/// points into the vector passed to evaluate(), which must outlive it.
struct SeriesRow {
  const CycleRecord* record = nullptr;
  std::vector<double> mean_estimates;  // one per configured estimator
};

struct Evaluation {
  EvalReport report;
  std::vector<SeriesRow> series;
};

/// Records kept after the zero-queue filter, in evaluation order.
std::vector<const CycleRecord*> evaluated_records(const std::vector<CycleRecord>& records,
                                                  const RunConfig& cfg);

/// One seed's accumulators keyed by (day, lane) then estimator position, plus
/// the estimates it produced for each evaluated record.
struct SeedOutcome {
  std::map<std::pair<std::string, Lane>, std::vector<SeedCell>> cells;
  std::vector<std::vector<double>> estimates;  // [record][estimator]
};

SeedOutcome evaluate_seed(const std::vector<CycleRecord>& records, const RunConfig& cfg,
                          std::int64_t seed_index);

/// Runs every seed (in parallel across seeds) and aggregates.
Evaluation evaluate(const std::vector<CycleRecord>& records, const RunConfig& cfg);
EvalReport run_evaluation(const std::vector<CycleRecord>& records, const RunConfig& cfg);

/// Mean of m / QL over records with QL > 0 of the given day and lane.
double average_penetration(const std::vector<CycleRecord>& records, const std::string& day,
                           Lane lane);

}  // namespace qlest
