#pragma once

#include <cstdint>
#include <vector>

#include "qlest/exact.hpp"

namespace qlest {

/// Negative Hypergeometric parameters: k successes counted up to the r-th
/// failure in a population of S items holding K successes.
struct NhgParams {
  std::int64_t S = 0;
  std::int64_t K = 0;
  std::int64_t r = 1;
};

/// Throws std::invalid_argument unless 0 <= K <= S and 1 <= r <= S-K+1.
void validate(const NhgParams& p);

/// Probe evidence for one red phase.
///
/// l is the queue position of the last probe, m the number of probes in the
/// queue, t the whole second (from red start) at which the last probe joined
/// and R the red duration in seconds. Red is cut into 2R half-second slots,
/// so the last probe sits in slot 2t.
///
/// m = 0 is admitted only as l = t = 0, the no-information observation.
struct QueueObservation {
  std::int64_t l = 0;
  std::int64_t m = 0;
  std::int64_t t = 0;
  std::int64_t R = 0;

  friend bool operator==(const QueueObservation&, const QueueObservation&) = default;
};

/// Probe evidence without joining time; cmax is the largest possible number
/// of arrivals (2R slots by default).
struct QueueObservationNoTime {
  std::int64_t l = 0;
  std::int64_t m = 0;
  std::int64_t cmax = 0;

  friend bool operator==(const QueueObservationNoTime&, const QueueObservationNoTime&) = default;
};

void validate(const QueueObservation& obs);
void validate(const QueueObservationNoTime& obs);
bool is_valid(const QueueObservation& obs) noexcept;
bool is_valid(const QueueObservationNoTime& obs) noexcept;

/// The distribution a conditional queue pmf reduces to.
NhgParams nhg_params(const QueueObservation& obs);
NhgParams nhg_params(const QueueObservationNoTime& obs);

ExactProbability nhg_pmf(std::int64_t k, const NhgParams& p);
Rational nhg_mean(const NhgParams& p);
Rational nhg_var(const NhgParams& p);

/// P(N = n | l, m, t, R). Zero outside l <= n <= 2R-2t+l.
ExactProbability queue_pmf_time(std::int64_t n, const QueueObservation& obs);

/// The arrangement-count weight C(n-m, l-m) C(2R-(n-m), 2t-(l-m)) / C(2R, 2t)
/// before normalization. Summed over the support it gives (2R+1)/(2t+1).
ExactProbability unnormalized_weight(std::int64_t n, const QueueObservation& obs);

/// The same weight written as C(2t, l-m) C(2R-2t, n-l) / C(2R, n-m).
ExactProbability unnormalized_weight_by_slots(std::int64_t n, const QueueObservation& obs);

/// P(N = n | l, m, cmax). Zero outside l <= n <= cmax.
ExactProbability queue_pmf_notime(std::int64_t n, const QueueObservationNoTime& obs);

/// A pmf materialized over its bounded support n_min .. n_min + size - 1.
struct QueuePmf {
  std::int64_t n_min = 0;
  std::vector<ExactProbability> probabilities;

  std::int64_t n_max() const {
    return n_min + static_cast<std::int64_t>(probabilities.size()) - 1;
  }
};

QueuePmf queue_pmf_time_vector(const QueueObservation& obs);
QueuePmf queue_pmf_notime_vector(const QueueObservationNoTime& obs);

struct ExactMoments {
  Rational total;  // sum of probabilities
  Rational mean;
  Rational variance;
};

/// Moments by direct summation over the materialized support.
ExactMoments moments(const QueuePmf& pmf);

/// Floating evaluation over the same support, computed from the NHG term
/// ratio in double precision without going through the rationals.
std::vector<double> nhg_pmf_double(const NhgParams& p);
std::vector<double> queue_pmf_time_double(const QueueObservation& obs);
std::vector<double> queue_pmf_notime_double(const QueueObservationNoTime& obs);

}  // namespace qlest
