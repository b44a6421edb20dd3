#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qlest/distributions.hpp"
#include "qlest/simulator.hpp"

namespace qlest {
namespace {

TEST(Simulator, SameSeedSameSequence) {
  SimConfig cfg;
  cfg.seed = 42;
  CycleSimulator a(cfg), b(cfg);
  for (int i = 0; i < 200; ++i) {
    const SimulatedCycle x = a.next(35), y = b.next(35);
    ASSERT_EQ(x.pattern.slots, y.pattern.slots);
    ASSERT_EQ(x.observation, y.observation);
  }
}

TEST(Simulator, ExtractionMatchesPattern) {
  SimConfig cfg;
  cfg.arrival_probability = 0.3;
  cfg.probe_probability = 0.4;
  CycleSimulator sim(cfg);
  for (int i = 0; i < 500; ++i) {
    const SimulatedCycle c = sim.next(20);
    ASSERT_EQ(c.pattern.slots.size(), 40u);
    const PatternSummary s = summarize(c.pattern);
    ASSERT_EQ(c.true_queue, s.arrivals);
    ASSERT_EQ(c.probe_count, s.probes);
    ASSERT_TRUE(c.observation.has_value());
    const QueueObservation& obs = *c.observation;
    ASSERT_TRUE(is_valid(obs));
    ASSERT_EQ(obs.m, s.probes);
    ASSERT_EQ(obs.l, s.last_probe_order);
    ASSERT_EQ(obs.t, (s.last_probe_slot + 1) / 2);
    ASSERT_LE(obs.l, c.true_queue);
  }
}

TEST(Simulator, EdgeProbabilities) {
  SimConfig cfg;
  cfg.probe_probability = 0.0;
  CycleSimulator none(cfg);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(none.next(30).observation->m, 0);

  cfg.probe_probability = 1.0;
  cfg.arrival_probability = 1.0;
  CycleSimulator full(cfg);
  const SimulatedCycle c = full.next(30);
  EXPECT_EQ(c.true_queue, 60);
  EXPECT_EQ(*c.observation, (QueueObservation{60, 60, 30, 30}));
}

TEST(Simulator, PlatoonKeepsOccupancy) {
  SimConfig cfg;
  cfg.arrival_probability = 0.2;
  cfg.platoon = PlatoonConfig{4.0};
  CycleSimulator sim(cfg);
  double arrivals = 0;
  const int cycles = 4000;
  for (int i = 0; i < cycles; ++i) arrivals += static_cast<double>(sim.next(30).true_queue);
  EXPECT_NEAR(arrivals / (cycles * 60.0), 0.2, 0.01);
}

TEST(Simulator, RejectsBadConfig) {
  SimConfig cfg;
  cfg.arrival_probability = 1.5;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
}

TEST(Protocol, GammaMeanBeforeClamp) {
  std::mt19937_64 rng(7);
  const std::int64_t n = 10, m = 2;
  const double C = 90.0;
  double sum_raw = 0.0, sum_l = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const ProtocolSample s = protocol_sample(n, m, C, 45, rng);
    sum_raw += s.raw_t;
    sum_l += static_cast<double>(s.l);
  }
  // E[raw t] = E[l] * C / (2n) with E[l] = (m + n) / 2.
  const double expected = (m + n) / 2.0 * C / (2.0 * n);
  EXPECT_NEAR(sum_raw / draws, expected, 0.02 * expected);
  EXPECT_NEAR(sum_l / draws, 6.0, 0.05);
}

TEST(Protocol, OutputsValidObservations) {
  std::mt19937_64 rng(3);
  for (std::int64_t n = 0; n <= 30; ++n) {
    for (std::int64_t m = 0; m <= std::min<std::int64_t>(n, 20); ++m) {
      const ProtocolSample s = protocol_sample(n, m, 20.0, 10, rng);
      ASSERT_TRUE(is_valid(QueueObservation{s.l, m, s.t, 10})) << n << " " << m;
      if (m > 0) {
        ASSERT_GE(s.l, m);
      } else {
        ASSERT_EQ(s.l, 0);
      }
    }
  }
  EXPECT_THROW(protocol_sample(30, 21, 20.0, 10, rng), std::invalid_argument);
}

TEST(Oracle, MatchesPmfExactly) {
  for (std::int64_t R = 1; R <= 5; ++R) {
    for (std::int64_t t = 0; t <= R; ++t) {
      for (std::int64_t l = t == 0 ? 0 : 1; l <= 2 * t; ++l) {
        for (std::int64_t m = t == 0 ? 0 : 1; m <= l; ++m) {
          const QueueObservation obs{l, m, t, R};
          const std::vector<Rational> oracle = conditional_oracle(obs);
          const QueuePmf pmf = queue_pmf_time_vector(obs);
          ASSERT_EQ(oracle.size(), pmf.probabilities.size());
          for (std::size_t i = 0; i < oracle.size(); ++i) {
            ASSERT_EQ(oracle[i], pmf.probabilities[i].value()) << l << m << t << R;
          }
        }
      }
    }
  }
  EXPECT_THROW(conditional_oracle({1, 1, 1, kOracleMaxRed + 1}), std::invalid_argument);
}

TEST(MonteCarlo, IndependentSlotsNearPmf) {
  std::mt19937_64 rng(11);
  const QueueObservation obs{3, 2, 2, 5};
  const MonteCarloResult mc = monte_carlo_conditional(obs, 20000, Placement::IndependentSlots, rng);
  EXPECT_EQ(mc.accepted, 20000);
  EXPECT_LT(total_variation(mc.frequencies, queue_pmf_time_double(obs)), 0.03);
}

TEST(MonteCarlo, AcceptanceFloor) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(monte_carlo_conditional({1, 1, 1, 10}, 100000, Placement::IndependentSlots, rng, {}, 0.9),
               std::runtime_error);
}

TEST(TotalVariation, Basics) {
  EXPECT_DOUBLE_EQ(total_variation({0.5, 0.5}, {0.5, 0.5}), 0.0);
  EXPECT_DOUBLE_EQ(total_variation({1.0, 0.0}, {0.0, 1.0}), 1.0);
  EXPECT_THROW(total_variation({1.0}, {0.5, 0.5}), std::invalid_argument);
}

}  // namespace
}  // namespace qlest
