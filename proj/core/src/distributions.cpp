#include "qlest/distributions.hpp"

#include <sstream>
#include <stdexcept>

#include "qlest/combinatorics.hpp"

namespace qlest {

namespace {

std::string describe(const QueueObservation& obs) {
  std::ostringstream os;
  os << "(l=" << obs.l << ", m=" << obs.m << ", t=" << obs.t << ", R=" << obs.R << ")";
  return os.str();
}

const char* violation(const QueueObservation& obs) {
  if (obs.R < 0) return "R must be nonnegative";
  if (obs.m < 0 || obs.l < obs.m) return "need 0 <= m <= l";
  if (obs.t < 0 || obs.t > obs.R) return "need 0 <= t <= R";
  if (obs.m == 0) {
    if (obs.l != 0 || obs.t != 0) return "m = 0 requires l = 0 and t = 0";
  } else {
    if (obs.t < 1) return "m >= 1 requires t >= 1";
    if (obs.l > 2 * obs.t) return "m >= 1 requires l <= 2t";
  }
  return nullptr;
}

const char* violation(const QueueObservationNoTime& obs) {
  if (obs.m < 0 || obs.l < obs.m || obs.l > obs.cmax) return "need 0 <= m <= l <= cmax";
  return nullptr;
}

ExactInteger zero_below(std::int64_t n, std::int64_t k) {
  if (n < 0) return 0;
  return binom(n, k);
}

}  // namespace

void validate(const NhgParams& p) {
  if (p.K < 0 || p.K > p.S || p.r < 1 || p.r > p.S - p.K + 1) {
    std::ostringstream os;
    os << "invalid negative hypergeometric parameters (S=" << p.S << ", K=" << p.K
       << ", r=" << p.r << ")";
    throw std::invalid_argument(os.str());
  }
}

void validate(const QueueObservation& obs) {
  if (const char* why = violation(obs)) {
    throw std::invalid_argument(std::string("invalid observation ") + describe(obs) + ": " + why);
  }
}

void validate(const QueueObservationNoTime& obs) {
  if (const char* why = violation(obs)) {
    std::ostringstream os;
    os << "invalid observation (l=" << obs.l << ", m=" << obs.m << ", cmax=" << obs.cmax
       << "): " << why;
    throw std::invalid_argument(os.str());
  }
}

bool is_valid(const QueueObservation& obs) noexcept { return violation(obs) == nullptr; }
bool is_valid(const QueueObservationNoTime& obs) noexcept { return violation(obs) == nullptr; }

NhgParams nhg_params(const QueueObservation& obs) {
  validate(obs);
  return {.S = 2 * obs.R + 1, .K = 2 * obs.R - 2 * obs.t, .r = obs.l - obs.m + 1};
}

NhgParams nhg_params(const QueueObservationNoTime& obs) {
  validate(obs);
  return {.S = obs.cmax + 1, .K = obs.cmax - obs.l, .r = obs.l - obs.m + 1};
}

ExactProbability nhg_pmf(std::int64_t k, const NhgParams& p) {
  validate(p);
  if (k < 0 || k > p.K) return {};
  // r = S-K+1: the r-th failure never comes, all K successes are drawn.
  if (p.r == p.S - p.K + 1) return ExactProbability(Rational(k == p.K ? 1 : 0));
  return {binom(k + p.r - 1, k) * zero_below(p.S - p.r - k, p.K - k), binom(p.S, p.K)};
}

Rational nhg_mean(const NhgParams& p) {
  validate(p);
  return make_rational(ExactInteger(p.r) * p.K, ExactInteger(p.S - p.K + 1));
}

Rational nhg_var(const NhgParams& p) {
  validate(p);
  const ExactInteger gap = p.S - p.K + 1;
  const ExactInteger num = ExactInteger(p.r) * p.K * (p.S + 1) * (p.S - p.K - p.r + 1);
  const ExactInteger den = gap * gap * (p.S - p.K + 2);
  return make_rational(num, den);
}

ExactProbability queue_pmf_time(std::int64_t n, const QueueObservation& obs) {
  validate(obs);
  const auto [l, m, t, R] = obs;
  if (n < l || n > 2 * R - 2 * t + l) return {};
  return {binom(n - m, l - m) * binom(2 * R + m - n, 2 * t + m - l), binom(2 * R + 1, 2 * t + 1)};
}

ExactProbability unnormalized_weight(std::int64_t n, const QueueObservation& obs) {
  validate(obs);
  const auto [l, m, t, R] = obs;
  if (n < l || n > 2 * R - 2 * t + l) return {};
  return {binom(n - m, l - m) * binom(2 * R - (n - m), 2 * t - (l - m)), binom(2 * R, 2 * t)};
}

ExactProbability unnormalized_weight_by_slots(std::int64_t n, const QueueObservation& obs) {
  validate(obs);
  const auto [l, m, t, R] = obs;
  if (n < l || n > 2 * R - 2 * t + l) return {};
  return {binom(2 * t, l - m) * binom(2 * R - 2 * t, n - l), binom(2 * R, n - m)};
}

ExactProbability queue_pmf_notime(std::int64_t n, const QueueObservationNoTime& obs) {
  validate(obs);
  const auto [l, m, cmax] = obs;
  if (n < l || n > cmax) return {};
  const ExactInteger num = binom(cmax - n + m, cmax - n) * binom(n - m, n - l) * (l + 1);
  const ExactInteger den = binom(cmax, l) * (cmax + 1);
  return {num, den};
}

QueuePmf queue_pmf_time_vector(const QueueObservation& obs) {
  validate(obs);
  QueuePmf pmf{.n_min = obs.l, .probabilities = {}};
  const std::int64_t n_max = 2 * obs.R - 2 * obs.t + obs.l;
  pmf.probabilities.reserve(static_cast<std::size_t>(n_max - obs.l + 1));
  for (std::int64_t n = obs.l; n <= n_max; ++n) {
    pmf.probabilities.push_back(queue_pmf_time(n, obs));
  }
  return pmf;
}

QueuePmf queue_pmf_notime_vector(const QueueObservationNoTime& obs) {
  validate(obs);
  QueuePmf pmf{.n_min = obs.l, .probabilities = {}};
  pmf.probabilities.reserve(static_cast<std::size_t>(obs.cmax - obs.l + 1));
  for (std::int64_t n = obs.l; n <= obs.cmax; ++n) {
    pmf.probabilities.push_back(queue_pmf_notime(n, obs));
  }
  return pmf;
}

ExactMoments moments(const QueuePmf& pmf) {
  Rational total = 0, first = 0, second = 0;
  std::int64_t n = pmf.n_min;
  for (const auto& p : pmf.probabilities) {
    const Rational& v = p.value();
    total += v;
    first += v * n;
    second += v * n * n;
    ++n;
  }
  Rational variance = second - first * first;
  variance.canonicalize();
  return {total, first, variance};
}

std::vector<double> nhg_pmf_double(const NhgParams& p) {
  validate(p);
  // p(0) = C(S-r, K) / C(S, K) as a product of K ratios, then the term
  // ratio p(k+1)/p(k) = (k+r)(K-k) / ((k+1)(S-r-k)).
  std::vector<double> out(static_cast<std::size_t>(p.K + 1), 0.0);
  if (p.r == p.S - p.K + 1) {
    // Every failure but the last precedes all successes: point mass at K.
    out.back() = 1.0;
    return out;
  }
  double head = 1.0;
  for (std::int64_t i = 0; i < p.K; ++i) {
    head *= static_cast<double>(p.S - p.r - i) / static_cast<double>(p.S - i);
  }
  out[0] = head;
  for (std::int64_t k = 0; k < p.K; ++k) {
    const double ratio = static_cast<double>((k + p.r) * (p.K - k)) /
                         static_cast<double>((k + 1) * (p.S - p.r - k));
    out[static_cast<std::size_t>(k + 1)] = out[static_cast<std::size_t>(k)] * ratio;
  }
  return out;
}

std::vector<double> queue_pmf_time_double(const QueueObservation& obs) {
  return nhg_pmf_double(nhg_params(obs));
}

std::vector<double> queue_pmf_notime_double(const QueueObservationNoTime& obs) {
  return nhg_pmf_double(nhg_params(obs));
}

}  // namespace qlest
