#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qlest/distributions.hpp"
#include "qlest/estimators.hpp"

namespace qlest {
namespace {

// Every valid time observation with 1 <= R <= r_max, m = 0 included.
std::vector<QueueObservation> time_grid(std::int64_t r_max) {
  std::vector<QueueObservation> grid;
  for (std::int64_t R = 1; R <= r_max; ++R) {
    grid.push_back({0, 0, 0, R});
    for (std::int64_t t = 1; t <= R; ++t) {
      for (std::int64_t l = 1; l <= 2 * t; ++l) {
        for (std::int64_t m = 1; m <= l; ++m) grid.push_back({l, m, t, R});
      }
    }
  }
  return grid;
}

std::vector<QueueObservationNoTime> notime_grid(std::int64_t cmax_max) {
  std::vector<QueueObservationNoTime> grid;
  for (std::int64_t c = 0; c <= cmax_max; ++c) {
    for (std::int64_t l = 0; l <= c; ++l) {
      for (std::int64_t m = 0; m <= l; ++m) {
        if (is_valid(QueueObservationNoTime{l, m, c})) grid.push_back({l, m, c});
      }
    }
  }
  return grid;
}

Rational q(long num, long den) { return make_rational(num, den); }

TEST(Validation, ObservationRules) {
  EXPECT_TRUE(is_valid(QueueObservation{4, 2, 20, 45}));
  EXPECT_TRUE(is_valid(QueueObservation{0, 0, 0, 5}));
  EXPECT_FALSE(is_valid(QueueObservation{3, 0, 2, 5}));   // m = 0 needs l = t = 0
  EXPECT_FALSE(is_valid(QueueObservation{5, 2, 2, 5}));   // l > 2t
  EXPECT_FALSE(is_valid(QueueObservation{2, 3, 2, 5}));   // m > l
  EXPECT_FALSE(is_valid(QueueObservation{2, 1, 6, 5}));   // t > R
  EXPECT_FALSE(is_valid(QueueObservation{1, 1, 0, 5}));   // probe needs t >= 1
  EXPECT_THROW(validate(QueueObservation{5, 2, 2, 5}), std::invalid_argument);
  EXPECT_FALSE(is_valid(QueueObservationNoTime{5, 2, 4}));
  EXPECT_THROW(validate(NhgParams{5, 6, 1}), std::invalid_argument);
}

TEST(Nhg, MappingAndMoments) {
  const NhgParams p = nhg_params(QueueObservation{3, 2, 2, 5});
  EXPECT_EQ(p.S, 11);
  EXPECT_EQ(p.K, 6);
  EXPECT_EQ(p.r, 2);
  const NhgParams pn = nhg_params(QueueObservationNoTime{4, 2, 90});
  EXPECT_EQ(pn.S, 91);
  EXPECT_EQ(pn.K, 86);
  EXPECT_EQ(pn.r, 3);

  const NhgParams small{9, 4, 2};
  EXPECT_EQ(nhg_mean(small), q(4, 3));
  EXPECT_EQ(nhg_var(small), q(80, 63));
}

TEST(Nhg, PmfSumsToOneAndMatchesMoments) {
  for (std::int64_t S = 1; S <= 14; ++S) {
    for (std::int64_t K = 0; K <= S; ++K) {
      for (std::int64_t r = 1; r <= S - K + 1; ++r) {
        const NhgParams p{S, K, r};
        Rational total = 0, first = 0, second = 0;
        for (std::int64_t k = 0; k <= K; ++k) {
          const Rational pk = nhg_pmf(k, p).value();
          total += pk;
          first += pk * k;
          second += pk * k * k;
        }
        ASSERT_EQ(total, 1);
        ASSERT_EQ(first, nhg_mean(p));
        ASSERT_EQ(second - first * first, nhg_var(p));
      }
    }
  }
}

TEST(QueuePmf, FrozenEq11Vector) {
  const QueuePmf pmf = queue_pmf_time_vector({3, 2, 2, 5});
  const std::vector<Rational> expected = {q(2, 11),   q(8, 33),  q(5, 22), q(40, 231),
                                          q(25, 231), q(4, 77),  q(1, 66)};
  ASSERT_EQ(pmf.n_min, 3);
  ASSERT_EQ(pmf.n_max(), 9);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(pmf.probabilities[i].value(), expected[i]);
  EXPECT_TRUE(queue_pmf_time(2, {3, 2, 2, 5}).is_zero());
  EXPECT_TRUE(queue_pmf_time(10, {3, 2, 2, 5}).is_zero());
}

TEST(QueuePmf, UnnormalizedWeightTotal) {
  Rational total = 0;
  for (std::int64_t n = 3; n <= 9; ++n) total += unnormalized_weight(n, {3, 2, 2, 5}).value();
  EXPECT_EQ(total, q(11, 5));
}

TEST(QueuePmf, NoTimeFrozenMoments) {
  const ExactMoments mom = moments(queue_pmf_notime_vector({3, 2, 10}));
  EXPECT_EQ(mom.total, 1);
  EXPECT_EQ(mom.mean, q(29, 5));
  EXPECT_EQ(mom.variance, q(84, 25));
}

TEST(QueuePmf, PriorObservationIsUniform) {
  const QueuePmf pmf = queue_pmf_time_vector({0, 0, 0, 5});
  ASSERT_EQ(pmf.probabilities.size(), 11u);
  for (const auto& p : pmf.probabilities) EXPECT_EQ(p.value(), q(1, 11));
}

TEST(QueuePmf, NormalizedTimeGrid) {
  for (const auto& obs : time_grid(8)) {
    const ExactMoments mom = moments(queue_pmf_time_vector(obs));
    ASSERT_EQ(mom.total, 1) << obs.l << " " << obs.m << " " << obs.t << " " << obs.R;
  }
}

TEST(QueuePmf, NormalizedNoTimeGrid) {
  for (const auto& obs : notime_grid(20)) {
    ASSERT_EQ(moments(queue_pmf_notime_vector(obs)).total, 1) << obs.l << " " << obs.m << " " << obs.cmax;
  }
}

TEST(QueuePmf, WeightScalesToPmf) {
  for (const auto& obs : time_grid(6)) {
    const Rational scale = make_rational(2 * obs.t + 1, 2 * obs.R + 1);
    for (std::int64_t n = obs.l; n <= 2 * obs.R - 2 * obs.t + obs.l; ++n) {
      ASSERT_EQ(queue_pmf_time(n, obs).value(), unnormalized_weight(n, obs).value() * scale);
      ASSERT_EQ(unnormalized_weight(n, obs).value(), unnormalized_weight_by_slots(n, obs).value());
    }
  }
}

TEST(QueuePmf, MatchesNhgShift) {
  for (const auto& obs : time_grid(6)) {
    const NhgParams p = nhg_params(obs);
    for (std::int64_t k = 0; k <= p.K; ++k) {
      ASSERT_EQ(queue_pmf_time(obs.l + k, obs).value(), nhg_pmf(k, p).value());
    }
  }
}

TEST(QueuePmf, FloatingAgreesWithExact) {
  auto check = [](const QueuePmf& exact, const std::vector<double>& approx) {
    ASSERT_EQ(exact.probabilities.size(), approx.size());
    for (std::size_t i = 0; i < approx.size(); ++i) {
      const double ref = exact.probabilities[i].to_double();
      if (ref == 0.0) {
        ASSERT_EQ(approx[i], 0.0);
      } else {
        ASSERT_LE(std::abs(approx[i] - ref) / ref, 1e-12);
      }
    }
  };
  for (const auto& obs : time_grid(10)) check(queue_pmf_time_vector(obs), queue_pmf_time_double(obs));
  for (const auto& obs : notime_grid(20)) {
    check(queue_pmf_notime_vector(obs), queue_pmf_notime_double(obs));
  }
}

TEST(QueuePmf, ClosedFormsEqualSummedMoments) {
  for (const auto& obs : time_grid(7)) {
    const ExactMoments mom = moments(queue_pmf_time_vector(obs));
    const ExactEstimate est = np_est1_exact(obs);
    ASSERT_EQ(mom.mean, est.mean);
    ASSERT_EQ(mom.variance, est.variance);
  }
  for (const auto& obs : notime_grid(20)) {
    const ExactMoments mom = moments(queue_pmf_notime_vector(obs));
    const ExactEstimate est = np_est2_exact(obs);
    ASSERT_EQ(mom.mean, est.mean);
    ASSERT_EQ(mom.variance, est.variance);
  }
}

TEST(ExactProbabilityType, RangeChecked) {
  EXPECT_THROW(ExactProbability(q(3, 2)), std::domain_error);
  EXPECT_THROW(ExactProbability(q(-1, 2)), std::domain_error);
  EXPECT_EQ(ExactProbability(q(2, 4)).to_string(), "1/2");
  EXPECT_LT(ExactProbability(q(1, 3)), ExactProbability(q(1, 2)));
}

}  // namespace
}  // namespace qlest
