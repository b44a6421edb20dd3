#include "qlest/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace qlest {

namespace {

constexpr std::array<std::string_view, 6> kNames = {"NP1",  "NP2",       "EST1",
                                                    "EST2", "HCM_DELAY", "Q_BACK"};

ExactEstimate nhg_closed_form(std::int64_t r, std::int64_t free_slots, std::int64_t gap,
                              std::int64_t offset) {
  // Mean offset + r K / g and variance r (S+1) K / (g (g+1)) (1 - r / g) with
  // g = S - K + 1; for both queue models S + 1 = K + g.
  const ExactInteger g = gap;
  const ExactInteger k = free_slots;
  ExactEstimate out;
  out.mean = Rational(offset) + make_rational(ExactInteger(r) * k, g);
  out.variance = make_rational(ExactInteger(r) * (k + g) * k, g * (g + 1)) *
                 (Rational(1) - make_rational(r, g));
  out.mean.canonicalize();
  out.variance.canonicalize();
  return out;
}

Estimate from_exact(const ExactEstimate& e, EstimatorId id) {
  return {.mean = e.mean.get_d(), .variance = e.variance.get_d(), .estimator = id};
}

void require_red(double red) {
  if (!(red > 0.0)) {
    throw std::invalid_argument("red duration must be positive");
  }
}

}  // namespace

std::string_view to_string(EstimatorId id) { return kNames[static_cast<std::size_t>(id)]; }

EstimatorId parse_estimator(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == upper) return kAllEstimators[i];
  }
  throw std::invalid_argument("unknown estimator '" + std::string(name) +
                              "' (expected NP1, NP2, EST1, EST2, HCM_DELAY or Q_BACK)");
}

SignalCycle SignalCycle::from_cycle(double cycle_seconds, double red_fraction) {
  SignalCycle c{cycle_seconds, cycle_seconds * red_fraction, cycle_seconds * (1.0 - red_fraction)};
  validate(c);
  return c;
}

void validate(const SignalCycle& c) {
  if (!(c.cycle > 0.0) || c.red < 0.0 || c.green < 0.0 ||
      std::abs(c.red + c.green - c.cycle) > 1e-9 * c.cycle) {
    std::ostringstream os;
    os << "invalid signal cycle (C=" << c.cycle << ", R=" << c.red << ", G=" << c.green << ")";
    throw std::invalid_argument(os.str());
  }
}

void validate(const HcmConfig& cfg) {
  const bool ok = cfg.progression_factor > 0 && cfg.incremental_factor > 0 &&
                  cfg.upstream_filtering > 0 && cfg.capacity_vph > 0 &&
                  cfg.saturation_flow > 0 && cfg.initial_queue_delay >= 0 &&
                  (!cfg.analysis_hours || *cfg.analysis_hours > 0);
  if (!ok) throw std::invalid_argument("HCM configuration values must be positive");
}

void ProbeHistory::record(double l, double m, double t) {
  if (l < 0 || m < 0 || t < 0) {
    throw std::invalid_argument("probe history entries must be nonnegative");
  }
  ++cycles_;
  if (m > 0) ++probe_cycles_;
  sum_l_ += l;
  sum_m_ += m;
  sum_t_ += t;
}

double ProbeHistory::mean_l() const {
  if (!has_probe_data()) throw HistoryRequired("probe history is empty");
  return sum_l_ / static_cast<double>(cycles_);
}

double ProbeHistory::mean_m() const {
  if (!has_probe_data()) throw HistoryRequired("probe history is empty");
  return sum_m_ / static_cast<double>(cycles_);
}

double ProbeHistory::mean_t() const {
  if (!has_probe_data()) throw HistoryRequired("probe history is empty");
  return sum_t_ / static_cast<double>(cycles_);
}

RateEstimates rate_estimates(const QueueObservation& obs) {
  validate(obs);
  if (obs.m == 0) {
    throw HistoryRequired("rate estimates are undefined without probes in the queue");
  }
  const double l = static_cast<double>(obs.l);
  const double m = static_cast<double>(obs.m);
  const double t = static_cast<double>(obs.t);
  const double R = static_cast<double>(obs.R);
  RateEstimates rates;
  rates.lambda1 = l / R;
  rates.lambda2 = (l - m) / t + m / R;
  rates.p1 = m / l;
  rates.p2 = m * t / (m * t + (l - m) * R);
  return rates;
}

ExactEstimate np_est1_exact(const QueueObservation& obs) {
  validate(obs);
  return nhg_closed_form(obs.l - obs.m + 1, 2 * obs.R - 2 * obs.t, 2 * obs.t + 2, obs.l);
}

Estimate np_est1(const QueueObservation& obs) {
  return from_exact(np_est1_exact(obs), EstimatorId::NP1);
}

ExactEstimate np_est2_exact(const QueueObservationNoTime& obs) {
  validate(obs);
  return nhg_closed_form(obs.l - obs.m + 1, obs.cmax - obs.l, obs.l + 2, obs.l);
}

Estimate np_est2(const QueueObservationNoTime& obs) {
  return from_exact(np_est2_exact(obs), EstimatorId::NP2);
}

Estimate np_est1_at(double l, double m, double t, double red) {
  if (l < 0 || m < 0 || m > l || red < 0) {
    throw std::invalid_argument("np_est1_at: need 0 <= m <= l and R >= 0");
  }
  t = std::clamp(t, 0.0, red);
  const double r = l - m + 1.0;
  const double gap = 2.0 * t + 2.0;
  const double mean = l + r * (red - t) / (t + 1.0);
  const double var = r * (2.0 * red + 2.0) * (2.0 * red - 2.0 * t) / (gap * (gap + 1.0)) *
                     (1.0 - r / gap);
  return {.mean = mean, .variance = std::max(var, 0.0), .estimator = EstimatorId::NP1};
}

Estimate np_est2_at(double l, double m, double cmax) {
  if (l < 0 || m < 0 || m > l || cmax < l) {
    throw std::invalid_argument("np_est2_at: need 0 <= m <= l <= cmax");
  }
  const double r = l - m + 1.0;
  const double gap = l + 2.0;
  const double mean = l + r * (cmax - l) / gap;
  const double var = r * (cmax + 2.0) * (cmax - l) / (gap * (gap + 1.0)) * (1.0 - r / gap);
  return {.mean = mean, .variance = std::max(var, 0.0), .estimator = EstimatorId::NP2};
}

Estimate param_est1(const QueueObservation& obs, const ProbeHistory& history) {
  validate(obs);
  const double R = static_cast<double>(obs.R);
  if (obs.m > 0) {
    const double l = static_cast<double>(obs.l);
    const double m = static_cast<double>(obs.m);
    const double t = static_cast<double>(obs.t);
    return {.mean = l + (l - m) * (1.0 - t / R), .variance = {}, .estimator = EstimatorId::EST1};
  }
  if (!history.has_probe_data()) {
    throw HistoryRequired("EST1 needs probe history for a cycle without probes");
  }
  require_red(R);
  const double lb = history.mean_l(), mb = history.mean_m(), tb = history.mean_t();
  const double mean = (1.0 - mb / lb) * (lb + (lb - mb) * (1.0 - tb / R));
  return {.mean = std::max(mean, 0.0), .variance = {}, .estimator = EstimatorId::EST1};
}

Estimate param_est2(const QueueObservation& obs, const ProbeHistory& history) {
  validate(obs);
  const double R = static_cast<double>(obs.R);
  if (obs.m > 0) {
    const double l = static_cast<double>(obs.l);
    const double m = static_cast<double>(obs.m);
    const double t = static_cast<double>(obs.t);
    return {.mean = m + (l - m) * R / t, .variance = {}, .estimator = EstimatorId::EST2};
  }
  if (!history.has_probe_data()) {
    throw HistoryRequired("EST2 needs probe history for a cycle without probes");
  }
  require_red(R);
  const double lb = history.mean_l(), mb = history.mean_m(), tb = history.mean_t();
  return {.mean = mb + (lb - mb) * R / tb, .variance = {}, .estimator = EstimatorId::EST2};
}

ControlDelay hcm_control_delay(const SignalCycle& cycle, double lambda_hat, const HcmConfig& cfg) {
  validate(cycle);
  validate(cfg);
  if (!(lambda_hat >= 0.0)) {
    throw std::invalid_argument("arrival rate must be nonnegative");
  }
  const double x = lambda_hat / cfg.saturation_flow;
  const double green_ratio = cycle.green / cycle.cycle;
  const double hours = cfg.analysis_hours.value_or(cycle.cycle / 3600.0);

  const double uniform_den = 1.0 - std::min(1.0, x) * green_ratio;
  if (uniform_den <= 0.0) {
    throw std::domain_error("uniform delay undefined: zero red time at volume-to-capacity >= 1");
  }
  ControlDelay d;
  d.volume_to_capacity = x;
  d.uniform = cycle.cycle / 2.0 * (1.0 - green_ratio) * (1.0 - green_ratio) / uniform_den;
  const double excess = x - 1.0;
  d.incremental =
      900.0 * hours *
      (excess + std::sqrt(excess * excess + 8.0 * cfg.incremental_factor * cfg.upstream_filtering *
                                                x / (cfg.capacity_vph * hours)));
  d.initial_queue = cfg.initial_queue_delay;
  return d;
}

Estimate hcm_delay_queue(const SignalCycle& cycle, double lambda_hat, const HcmConfig& cfg) {
  const ControlDelay d = hcm_control_delay(cycle, lambda_hat, cfg);
  return {.mean = d.total(cfg.progression_factor) * lambda_hat,
          .variance = {},
          .estimator = EstimatorId::HCM_DELAY};
}

Estimate q_back(double lambda_hat, double red, double saturation_flow) {
  if (!(lambda_hat >= 0.0) || red < 0.0 || !(saturation_flow > 0.0)) {
    throw std::invalid_argument("q_back: need lambda >= 0, R >= 0 and x_sat > 0");
  }
  if (lambda_hat >= saturation_flow) {
    std::ostringstream os;
    os << "arrival rate " << lambda_hat << " meets saturation flow " << saturation_flow
       << "; the queue never clears";
    throw Oversaturated(os.str());
  }
  const double service = lambda_hat * red / (saturation_flow - lambda_hat);
  return {.mean = lambda_hat * (red + service), .variance = {}, .estimator = EstimatorId::Q_BACK};
}

}  // namespace qlest
