#include "qlest/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qlest {

PatternSummary summarize(const ArrivalPattern& pattern) {
  PatternSummary s;
  for (std::size_t i = 0; i < pattern.slots.size(); ++i) {
    const SlotState state = pattern.slots[i];
    if (state == SlotState::Empty) continue;
    ++s.arrivals;
    if (state == SlotState::Probe) {
      ++s.probes;
      s.last_probe_order = s.arrivals;
      s.last_probe_slot = static_cast<std::int64_t>(i) + 1;
    }
  }
  return s;
}

namespace {

// Probability of an empty slot turning occupied in the platoon chain.
double platoon_entry_probability(double occupancy, double mean_run) {
  return occupancy / (mean_run * (1.0 - occupancy));
}

void fill_independent(ArrivalPattern& pattern, double occupancy, std::mt19937_64& rng) {
  std::bernoulli_distribution arrive(occupancy);
  for (auto& slot : pattern.slots) {
    slot = arrive(rng) ? SlotState::Vehicle : SlotState::Empty;
  }
}

void fill_platoon(ArrivalPattern& pattern, double occupancy, const PlatoonConfig& platoon,
                  std::mt19937_64& rng) {
  if (occupancy >= 1.0) {
    std::fill(pattern.slots.begin(), pattern.slots.end(), SlotState::Vehicle);
    return;
  }
  std::bernoulli_distribution start(occupancy);
  std::bernoulli_distribution stay(1.0 - 1.0 / platoon.mean_platoon_slots);
  std::bernoulli_distribution enter(platoon_entry_probability(occupancy, platoon.mean_platoon_slots));
  bool occupied = start(rng);
  for (auto& slot : pattern.slots) {
    slot = occupied ? SlotState::Vehicle : SlotState::Empty;
    occupied = occupied ? stay(rng) : enter(rng);
  }
}

}  // namespace

void validate(const SimConfig& cfg) {
  auto fail = [](const std::string& why) { throw std::invalid_argument("invalid simulation config: " + why); };
  if (cfg.slots_per_second < 1) fail("slots_per_second must be >= 1");
  if (!(cfg.arrival_probability >= 0.0 && cfg.arrival_probability <= 1.0)) {
    fail("arrival probability must be in [0, 1]");
  }
  if (!(cfg.probe_probability >= 0.0 && cfg.probe_probability <= 1.0)) {
    fail("probe probability must be in [0, 1]");
  }
  if (cfg.platoon) {
    if (!(cfg.platoon->mean_platoon_slots >= 1.0)) fail("mean platoon length must be >= 1 slot");
    if (cfg.arrival_probability < 1.0 &&
        platoon_entry_probability(cfg.arrival_probability, cfg.platoon->mean_platoon_slots) > 1.0) {
      fail("platoon length too short for the requested occupancy");
    }
  }
}

SimulatedCycle simulate_cycle(const SimConfig& cfg, std::int64_t red_seconds, std::mt19937_64& rng) {
  validate(cfg);
  if (red_seconds < 0) throw std::invalid_argument("red duration must be nonnegative");

  SimulatedCycle out;
  out.pattern.slots.assign(static_cast<std::size_t>(red_seconds * cfg.slots_per_second),
                           SlotState::Empty);
  if (cfg.platoon) {
    fill_platoon(out.pattern, cfg.arrival_probability, *cfg.platoon, rng);
  } else {
    fill_independent(out.pattern, cfg.arrival_probability, rng);
  }
  std::bernoulli_distribution probe(cfg.probe_probability);
  for (auto& slot : out.pattern.slots) {
    if (slot == SlotState::Vehicle && probe(rng)) slot = SlotState::Probe;
  }

  const PatternSummary s = summarize(out.pattern);
  out.true_queue = s.arrivals;
  out.probe_count = s.probes;
  QueueObservation obs{.l = 0, .m = 0, .t = 0, .R = red_seconds};
  if (s.probes > 0) {
    obs.l = s.last_probe_order;
    obs.m = s.probes;
    obs.t = (s.last_probe_slot + cfg.slots_per_second - 1) / cfg.slots_per_second;
  }
  if (is_valid(obs)) out.observation = obs;
  return out;
}

CycleSimulator::CycleSimulator(SimConfig cfg) : cfg_(cfg), rng_(cfg.seed) { validate(cfg_); }

std::vector<CycleRecord> simulate_records(const SimConfig& cfg, const CorpusLayout& layout) {
  if (layout.cycles < 0) throw std::invalid_argument("cycle count must be nonnegative");
  if (layout.red_seconds < 1) throw std::invalid_argument("red duration must be >= 1 s");
  const std::int64_t cycle = 2 * layout.red_seconds;
  if (layout.start_time + cycle * layout.cycles >= 24 * 3600) {
    throw std::invalid_argument("simulated cycles run past midnight");
  }
  CycleSimulator simulator(cfg);
  std::vector<CycleRecord> records;
  records.reserve(static_cast<std::size_t>(layout.cycles));
  for (std::int64_t i = 0; i < layout.cycles; ++i) {
    const SimulatedCycle c = simulator.next(layout.red_seconds);
    records.push_back({.day = layout.day,
                       .time_of_day = layout.start_time + i * cycle,
                       .lane = layout.lane,
                       .true_queue = c.true_queue,
                       .probe_count = c.probe_count,
                       .cycle_seconds = static_cast<double>(cycle)});
  }
  return records;
}

ProtocolSample protocol_sample(std::int64_t true_queue, std::int64_t probe_count,
                               double cycle_seconds, std::int64_t red_seconds,
                               std::mt19937_64& rng) {
  if (true_queue < 0 || probe_count < 0 || probe_count > true_queue) {
    throw std::invalid_argument("protocol_sample: need 0 <= m <= n");
  }
  if (true_queue == 0 || probe_count == 0) return {};
  if (!(cycle_seconds > 0.0) || red_seconds < 1) {
    throw std::invalid_argument("protocol_sample: need C > 0 and R >= 1");
  }
  if (probe_count > 2 * red_seconds) {
    throw std::invalid_argument("protocol_sample: more probes than red slots (m > 2R)");
  }

  ProtocolSample s;
  std::uniform_int_distribution<std::int64_t> order(probe_count, true_queue);
  s.l = std::min(order(rng), 2 * red_seconds);

  const double scale = cycle_seconds / (2.0 * static_cast<double>(true_queue));
  std::gamma_distribution<double> joining(static_cast<double>(s.l), scale);
  s.raw_t = joining(rng);
  const std::int64_t lo = std::max<std::int64_t>(1, (s.l + 1) / 2);
  s.t = std::clamp<std::int64_t>(std::llround(s.raw_t), lo, red_seconds);
  return s;
}

std::vector<Rational> conditional_oracle(const QueueObservation& obs) {
  validate(obs);
  if (obs.R > kOracleMaxRed) {
    std::ostringstream os;
    os << "conditional_oracle: R=" << obs.R << " exceeds the enumeration budget (R <= "
       << kOracleMaxRed << ")";
    throw std::invalid_argument(os.str());
  }
  const unsigned slots = static_cast<unsigned>(2 * obs.R);
  const std::uint32_t prefix_mask = (std::uint32_t{1} << (2 * obs.t)) - 1;
  const int ahead = static_cast<int>(obs.l - obs.m);

  // Subsets of the slots holding non-probe arrivals, bucketed by size.
  std::vector<std::int64_t> total(slots + 1, 0), matching(slots + 1, 0);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << slots); ++mask) {
    const int size = std::popcount(mask);
    ++total[static_cast<std::size_t>(size)];
    if (std::popcount(mask & prefix_mask) == ahead) ++matching[static_cast<std::size_t>(size)];
  }

  std::vector<Rational> weights;
  Rational norm = 0;
  for (std::int64_t n = obs.l; n <= 2 * obs.R - 2 * obs.t + obs.l; ++n) {
    const auto j = static_cast<std::size_t>(n - obs.m);
    Rational w(matching[j], total[j]);
    w.canonicalize();
    norm += w;
    weights.push_back(w);
  }
  for (auto& w : weights) {
    w /= norm;
    w.canonicalize();
  }
  return weights;
}

namespace {

// Non-probe vehicles among the first `prefix` of `slots` when `count` of
// them are placed as a uniformly random subset.
std::int64_t place_independent(std::int64_t count, std::int64_t slots, std::int64_t prefix,
                               std::mt19937_64& rng) {
  std::int64_t in_prefix = 0;
  std::int64_t remaining = count;
  for (std::int64_t i = 0; i < prefix && remaining > 0; ++i) {
    std::uniform_int_distribution<std::int64_t> pick(0, slots - i - 1);
    if (pick(rng) < remaining) {
      ++in_prefix;
      --remaining;
    }
  }
  return in_prefix;
}

// Same count laid out as platoons: geometric run lengths separated by at
// least one empty slot, with the spare empty slots spread uniformly over
// the gaps.
std::int64_t place_platoon(std::int64_t count, std::int64_t slots, std::int64_t prefix,
                           const PlatoonConfig& platoon, std::mt19937_64& rng) {
  if (count == 0) return 0;
  std::geometric_distribution<std::int64_t> extra(1.0 / platoon.mean_platoon_slots);
  std::vector<std::int64_t> runs;
  for (std::int64_t placed = 0; placed < count;) {
    const std::int64_t run = std::min(1 + extra(rng), count - placed);
    runs.push_back(run);
    placed += run;
  }
  const std::int64_t empties = slots - count;
  while (static_cast<std::int64_t>(runs.size()) - 1 > empties) {
    const std::int64_t last = runs.back();
    runs.pop_back();
    runs.back() += last;
  }
  const auto gaps = static_cast<std::int64_t>(runs.size()) + 1;
  const std::int64_t spare = empties - (gaps - 2);

  // Uniform composition of `spare` into `gaps` parts via sorted bar positions.
  std::vector<std::int64_t> bars(static_cast<std::size_t>(spare + gaps - 1));
  std::iota(bars.begin(), bars.end(), 0);
  std::shuffle(bars.begin(), bars.end(), rng);
  bars.resize(static_cast<std::size_t>(gaps - 1));
  std::sort(bars.begin(), bars.end());
  std::vector<std::int64_t> gap(static_cast<std::size_t>(gaps));
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    gap[i] = bars[i] - prev - 1;
    prev = bars[i];
  }
  gap.back() = spare + gaps - 1 - prev - 1;
  for (std::size_t i = 1; i + 1 < gap.size(); ++i) gap[i] += 1;

  std::int64_t pos = 0, in_prefix = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    pos += gap[i];
    const std::int64_t begin = pos, end = pos + runs[i];
    in_prefix += std::max<std::int64_t>(0, std::min(end, prefix) - begin);
    pos = end;
  }
  return in_prefix;
}

}  // namespace

MonteCarloResult monte_carlo_conditional(const QueueObservation& obs, std::int64_t accepted_target,
                                         Placement placement, std::mt19937_64& rng,
                                         const PlatoonConfig& platoon, double min_acceptance) {
  validate(obs);
  if (accepted_target < 1) throw std::invalid_argument("accepted_target must be >= 1");
  if (!(platoon.mean_platoon_slots >= 1.0)) {
    throw std::invalid_argument("mean platoon length must be >= 1 slot");
  }
  const std::int64_t slots = 2 * obs.R;
  const std::int64_t prefix = 2 * obs.t;
  const std::int64_t ahead = obs.l - obs.m;

  MonteCarloResult res;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(slots - prefix + 1), 0);
  std::uniform_int_distribution<std::int64_t> prior(0, slots);
  while (res.accepted < accepted_target) {
    const std::int64_t nonprobes = prior(rng);
    const std::int64_t in_prefix = placement == Placement::Platoon
                                       ? place_platoon(nonprobes, slots, prefix, platoon, rng)
                                       : place_independent(nonprobes, slots, prefix, rng);
    ++res.proposed;
    if (in_prefix == ahead) {
      ++counts[static_cast<std::size_t>(nonprobes - ahead)];
      ++res.accepted;
    }
    if (res.proposed == 10'000 &&
        static_cast<double>(res.accepted) / static_cast<double>(res.proposed) < min_acceptance) {
      throw std::runtime_error("monte_carlo_conditional: acceptance rate below floor");
    }
  }
  res.frequencies.reserve(counts.size());
  for (const auto c : counts) {
    res.frequencies.push_back(static_cast<double>(c) / static_cast<double>(res.accepted));
  }
  return res;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: support mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

}  // namespace qlest
