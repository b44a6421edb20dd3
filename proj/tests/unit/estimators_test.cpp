#include <gtest/gtest.h>

#include <cmath>

#include "qlest/distributions.hpp"
#include "qlest/estimators.hpp"
#include "qlest/simulator.hpp"

namespace qlest {
namespace {

Rational q(long num, long den) { return make_rational(num, den); }

TEST(EstimatorIds, RoundTrip) {
  for (EstimatorId id : kAllEstimators) EXPECT_EQ(parse_estimator(to_string(id)), id);
  EXPECT_EQ(parse_estimator("np1"), EstimatorId::NP1);
  EXPECT_THROW(parse_estimator("np3"), std::invalid_argument);
}

TEST(NpEst1, WorkedValue) {
  const ExactEstimate est = np_est1_exact({4, 2, 20, 45});
  EXPECT_EQ(est.mean, q(53, 7));
  EXPECT_EQ(est.variance, q(14950, 2107));
  const Estimate e = np_est1({4, 2, 20, 45});
  EXPECT_NEAR(e.mean, 7.5714285714285714, 1e-12);
  EXPECT_NEAR(*e.variance, 7.0953962980541054, 1e-12);
}

TEST(NpEst1, PriorObservation) {
  const ExactEstimate est = np_est1_exact({0, 0, 0, 5});
  EXPECT_EQ(est.mean, 5);
  EXPECT_EQ(est.variance, 10);
}

TEST(NpEst2, WorkedValues) {
  const ExactEstimate est = np_est2_exact({4, 2, 90});
  EXPECT_EQ(est.mean, 47);
  EXPECT_EQ(est.variance, q(1978, 7));
  EXPECT_EQ(np_est2_exact({3, 3, 12}).mean, q(24, 5));
}

TEST(NpEst2, EqualsNpEst1WhenLastProbeFillsTime) {
  // l = 2t puts no slack before the last probe, the case where both agree.
  for (std::int64_t R = 1; R <= 8; ++R) {
    for (std::int64_t t = 1; t <= R; ++t) {
      for (std::int64_t m = 1; m <= 2 * t; ++m) {
        const ExactEstimate a = np_est1_exact({2 * t, m, t, R});
        const ExactEstimate b = np_est2_exact({2 * t, m, 2 * R});
        ASSERT_EQ(a.mean, b.mean);
      }
    }
  }
}

TEST(NpEst1, MonotoneAndBounded) {
  for (std::int64_t R = 1; R <= 10; ++R) {
    for (std::int64_t t = 1; t <= R; ++t) {
      for (std::int64_t l = 1; l <= 2 * t; ++l) {
        for (std::int64_t m = 1; m <= l; ++m) {
          const ExactEstimate e = np_est1_exact({l, m, t, R});
          ASSERT_GE(e.mean, l);
          ASSERT_LE(e.mean, l + 2 * (R - t));
          ASSERT_GE(e.variance, 0);
          if (t < R && l <= 2 * t) ASSERT_LE(np_est1_exact({l, m, t + 1, R}).mean, e.mean);
          if (l < 2 * t) ASSERT_GE(np_est1_exact({l + 1, m, t, R}).mean, e.mean);
        }
      }
    }
  }
}

TEST(NpEst1, RealValuedEvaluationMatchesIntegers) {
  const Estimate e = np_est1_at(4.0, 2.0, 20.0, 45.0);
  EXPECT_NEAR(e.mean, 53.0 / 7.0, 1e-12);
  EXPECT_NEAR(np_est2_at(4.0, 2.0, 90.0).mean, 47.0, 1e-12);
}

TEST(NpEst1, ConditionallyUnbiasedAgainstOracle) {
  // The enumerated conditional's mean is what the estimator must return.
  for (const QueueObservation obs :
       {QueueObservation{3, 2, 2, 5}, QueueObservation{1, 1, 1, 4}, QueueObservation{6, 3, 4, 6}}) {
    const std::vector<Rational> dist = conditional_oracle(obs);
    Rational mean = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) mean += dist[i] * (obs.l + static_cast<long>(i));
    EXPECT_EQ(mean, np_est1_exact(obs).mean);
  }
}

TEST(Rates, WorkedValues) {
  const RateEstimates r = rate_estimates({4, 2, 20, 45});
  EXPECT_NEAR(r.lambda1, 4.0 / 45.0, 1e-15);
  EXPECT_NEAR(r.p1, 0.5, 1e-15);
  EXPECT_NEAR(r.lambda2, 2.0 / 20.0 + 2.0 / 45.0, 1e-15);
  EXPECT_NEAR(r.p2, 40.0 / 130.0, 1e-15);
  EXPECT_THROW(rate_estimates({0, 0, 0, 45}), HistoryRequired);
}

TEST(ParamEstimators, WorkedValues) {
  const ProbeHistory none;
  EXPECT_NEAR(param_est1({4, 2, 20, 45}, none).mean, 46.0 / 9.0, 1e-12);
  EXPECT_DOUBLE_EQ(param_est2({4, 2, 20, 45}, none).mean, 6.5);
}

TEST(ParamEstimators, ZeroProbeUsesHistory) {
  ProbeHistory history;
  EXPECT_THROW(param_est1({0, 0, 0, 45}, history), HistoryRequired);
  history.record(2, 1, 10);
  EXPECT_NEAR(param_est1({0, 0, 0, 45}, history).mean, 1.38889, 1e-5);
  EXPECT_NEAR(param_est2({0, 0, 0, 45}, history).mean, 5.5, 1e-12);
}

TEST(ProbeHistory, Means) {
  ProbeHistory h;
  EXPECT_FALSE(h.has_probe_data());
  EXPECT_THROW(static_cast<void>(h.mean_l()), HistoryRequired);
  h.record(0, 0, 0);
  EXPECT_FALSE(h.has_probe_data());
  h.record(4, 2, 10);
  EXPECT_TRUE(h.has_probe_data());
  EXPECT_EQ(h.cycles(), 2);
  EXPECT_DOUBLE_EQ(h.mean_l(), 2.0);
  EXPECT_DOUBLE_EQ(h.mean_m(), 1.0);
  EXPECT_DOUBLE_EQ(h.mean_t(), 5.0);
}

TEST(QBack, WorkedValue) {
  const Estimate e = q_back(0.1, 35.0, 0.286);
  EXPECT_NEAR(e.mean, 5.38172, 1e-5);
  EXPECT_THROW(q_back(0.3, 35.0, 0.286), Oversaturated);
  EXPECT_DOUBLE_EQ(q_back(0.0, 35.0, 0.286).mean, 0.0);
}

TEST(Hcm, WorkedDelay) {
  const SignalCycle cycle = SignalCycle::from_cycle(70.0, 0.5);
  EXPECT_DOUBLE_EQ(cycle.red, 35.0);
  EXPECT_DOUBLE_EQ(cycle.green, 35.0);
  HcmConfig cfg;
  const double lambda = 0.5 * cfg.saturation_flow;  // X = 0.5
  const ControlDelay d = hcm_control_delay(cycle, lambda, cfg);
  EXPECT_NEAR(d.uniform, 11.6667, 1e-3);
  EXPECT_NEAR(d.volume_to_capacity, 0.5, 1e-12);
  EXPECT_NEAR(d.incremental, 1.60252, 1e-4);
  EXPECT_NEAR(hcm_delay_queue(cycle, lambda, cfg).mean, d.total(1.0) * lambda, 1e-12);
}

TEST(Continuity, QBackAndHcmOnFineGrid) {
  const SignalCycle cycle = SignalCycle::from_cycle(70.0, 0.5);
  const HcmConfig cfg;
  double prev_q = q_back(0.0, 35.0, 0.286).mean;
  double prev_h = hcm_delay_queue(cycle, 0.0, cfg).mean;
  const double step = 1e-5;
  for (double lam = step; lam < 0.25; lam += step) {
    const double qb = q_back(lam, 35.0, 0.286).mean;
    const double hq = hcm_delay_queue(cycle, lam, cfg).mean;
    ASSERT_LT(std::abs(qb - prev_q), 0.05) << lam;
    ASSERT_LT(std::abs(hq - prev_h), 0.05) << lam;
    prev_q = qb;
    prev_h = hq;
  }
}

}  // namespace
}  // namespace qlest
