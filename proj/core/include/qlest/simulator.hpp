#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qlest/distributions.hpp"
#include "qlest/records.hpp"
#include "qlest/exact.hpp"

namespace qlest {

enum class SlotState : std::uint8_t { Empty, Vehicle, Probe };

/// One red phase cut into fixed-length slots, each holding at most one arrival.
struct ArrivalPattern {
  std::vector<SlotState> slots;
};

/// Counts read back off a pattern. last_probe_slot is 1-based, 0 when the
/// pattern has no probe.
struct PatternSummary {
  std::int64_t arrivals = 0;
  std::int64_t probes = 0;
  std::int64_t last_probe_order = 0;
  std::int64_t last_probe_slot = 0;
};

PatternSummary summarize(const ArrivalPattern& pattern);

/// Runs of consecutively occupied slots. Occupancy follows a two-state
/// Markov chain whose stationary occupancy equals the configured arrival
/// probability and whose mean run length is mean_platoon_slots.
struct PlatoonConfig {
  double mean_platoon_slots = 4.0;
};

struct SimConfig {
  int slots_per_second = 2;
  double arrival_probability = 0.0715;  // per slot: 0.5 * 0.286 veh/s over two slots
  std::optional<PlatoonConfig> platoon;
  double probe_probability = 0.2;
  std::uint64_t seed = 1;
};

void validate(const SimConfig& cfg);

struct SimulatedCycle {
  ArrivalPattern pattern;
  std::int64_t true_queue = 0;
  std::int64_t probe_count = 0;
  /// Probe evidence at whole-second resolution (t = ceil(slot / slots_per_second)).
  /// Empty when the evidence does not fit the two-slots-per-second model,
  /// which can only happen for slots_per_second > 2.
  std::optional<QueueObservation> observation;
};

/// Fills slots_per_second * red_seconds slots and extracts the evidence.
SimulatedCycle simulate_cycle(const SimConfig& cfg, std::int64_t red_seconds, std::mt19937_64& rng);

/// Deterministic stream of simulated cycles: a fixed seed always yields the
/// same sequence.
class CycleSimulator {
 public:
  explicit CycleSimulator(SimConfig cfg);

  SimulatedCycle next(std::int64_t red_seconds) { return simulate_cycle(cfg_, red_seconds, rng_); }
  const SimConfig& config() const { return cfg_; }

 private:
  SimConfig cfg_;
  std::mt19937_64 rng_;
};

/// Where and when a simulated corpus sits. Records are spaced one cycle
/// (2 * red_seconds) apart starting at start_time.
struct CorpusLayout {
  std::int64_t cycles = 0;
  std::int64_t red_seconds = 35;
  std::string day = "2000-01-01";
  Lane lane = Lane::Center;
  std::int64_t start_time = 7 * 3600;
};

/// Ground-truth records from consecutive simulated cycles. Throws
/// std::invalid_argument if the corpus would run past midnight.
std::vector<CycleRecord> simulate_records(const SimConfig& cfg, const CorpusLayout& layout);

/// Location and joining-time evidence drawn for a cycle whose true queue and
/// probe count are known: l uniform on {m .. n}, t a rounded Gamma(l, C / (2n))
/// variate clamped into the range the observation model allows.
struct ProtocolSample {
  std::int64_t l = 0;
  std::int64_t t = 0;
  double raw_t = 0.0;  // gamma variate before rounding and clamping
};

/// The clamp keeps (l, m, t, R) a valid observation: l is capped at 2R and t
/// lands in [max(1, ceil(l / 2)), R]. m = 0 or n = 0 gives (0, 0); m > 2R
/// cannot be placed and throws std::invalid_argument.
ProtocolSample protocol_sample(std::int64_t true_queue, std::int64_t probe_count,
                               double cycle_seconds, std::int64_t red_seconds,
                               std::mt19937_64& rng);

/// How non-probe vehicles are laid out over the red slots once their count is fixed.
enum class Placement { IndependentSlots, Platoon };

/// Exact conditional distribution of the queue by exhaustive enumeration:
/// every subset of the 2R slots is a possible set of non-probe arrivals, each
/// non-probe count is equally likely a priori, and a subset matches the
/// evidence when exactly l - m of its slots fall among the first 2t.
/// Returns probabilities for n = l .. 2R - 2t + l.
std::vector<Rational> conditional_oracle(const QueueObservation& obs);

/// Largest R conditional_oracle will enumerate (2^(2R) subsets).
inline constexpr std::int64_t kOracleMaxRed = 10;

struct MonteCarloResult {
  std::vector<double> frequencies;  // n = l .. 2R - 2t + l
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
};

/// Rejection sampler for the same conditional: draws the non-probe count
/// from a flat prior, lays the vehicles out with the given placement and
/// keeps draws whose first 2t slots hold exactly l - m of them. Stops after
/// `accepted_target` acceptances; throws std::runtime_error if the
/// acceptance rate falls below `min_acceptance` after the first 10^4 proposals.
MonteCarloResult monte_carlo_conditional(const QueueObservation& obs, std::int64_t accepted_target,
                                         Placement placement, std::mt19937_64& rng,
                                         const PlatoonConfig& platoon = {},
                                         double min_acceptance = 1e-3);

/// Total variation distance between two distributions over the same support.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace qlest
