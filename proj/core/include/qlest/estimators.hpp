#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qlest/distributions.hpp"
#include "qlest/exact.hpp"

namespace qlest {

enum class EstimatorId { NP1, NP2, EST1, EST2, HCM_DELAY, Q_BACK };

inline constexpr std::array<EstimatorId, 6> kAllEstimators = {
    EstimatorId::NP1,  EstimatorId::NP2,       EstimatorId::EST1,
    EstimatorId::EST2, EstimatorId::HCM_DELAY, EstimatorId::Q_BACK};

std::string_view to_string(EstimatorId id);
/// Accepts the canonical names above (case-insensitive). Throws std::invalid_argument.
EstimatorId parse_estimator(std::string_view name);

/// An estimator's output for one cycle. variance is empty for the
/// baselines that do not define one.
struct Estimate {
  double mean = 0.0;
  std::optional<double> variance;
  EstimatorId estimator = EstimatorId::NP1;
};

/// Thrown when an m = 0 cycle needs probe history and none exists yet.
class HistoryRequired : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown by the back-of-queue model when arrivals meet or exceed saturation.
class Oversaturated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Signal timing in seconds; cycle = red + green.
struct SignalCycle {
  double cycle = 0.0;
  double red = 0.0;
  double green = 0.0;

  /// Builds a cycle whose red phase is red_fraction of it.
  static SignalCycle from_cycle(double cycle_seconds, double red_fraction = 0.5);
};

void validate(const SignalCycle& cycle);

struct HcmConfig {
  double progression_factor = 1.0;
  double incremental_factor = 0.5;  // k
  double upstream_filtering = 1.0;  // I
  double capacity_vph = 1029.0;     // c
  double saturation_flow = 0.286;   // vehicles per second
  double initial_queue_delay = 0.0; // d3
  /// Analysis period in hours. Empty means one cycle, C / 3600.
  std::optional<double> analysis_hours;
};

void validate(const HcmConfig& cfg);

/// Running means of the probe evidence seen so far on one lane.
class ProbeHistory {
 public:
  /// Adds one cycle. Every cycle counts towards the means; the history only
  /// becomes usable once a cycle with m > 0 has been recorded.
  void record(double l, double m, double t);
  void record(const QueueObservation& obs) {
    record(static_cast<double>(obs.l), static_cast<double>(obs.m), static_cast<double>(obs.t));
  }

  bool has_probe_data() const { return probe_cycles_ > 0; }
  std::int64_t cycles() const { return cycles_; }
  double mean_l() const;
  double mean_m() const;
  double mean_t() const;

 private:
  std::int64_t cycles_ = 0;
  std::int64_t probe_cycles_ = 0;
  double sum_l_ = 0.0;
  double sum_m_ = 0.0;
  double sum_t_ = 0.0;
};

struct RateEstimates {
  double lambda1 = 0.0;  // l / R
  double lambda2 = 0.0;  // (l - m) / t + m / R
  double p1 = 0.0;       // m / l
  double p2 = 0.0;       // m t / (m t + (l - m) R)
};

/// Throws HistoryRequired when m = 0: the rates are undefined without probes.
RateEstimates rate_estimates(const QueueObservation& obs);

struct ExactEstimate {
  Rational mean;
  Rational variance;
};

/// Closed-form conditional mean and variance given (l, m, t, R).
ExactEstimate np_est1_exact(const QueueObservation& obs);
Estimate np_est1(const QueueObservation& obs);

/// Closed-form conditional mean and variance given (l, m, cmax).
ExactEstimate np_est2_exact(const QueueObservationNoTime& obs);
Estimate np_est2(const QueueObservationNoTime& obs);

/// The same closed forms evaluated at real-valued (averaged) evidence.
Estimate np_est1_at(double l, double m, double t, double red);
Estimate np_est2_at(double l, double m, double cmax);

Estimate param_est1(const QueueObservation& obs, const ProbeHistory& history);
Estimate param_est2(const QueueObservation& obs, const ProbeHistory& history);

/// Uniform, incremental and initial-queue delay terms, seconds per vehicle.
struct ControlDelay {
  double uniform = 0.0;
  double incremental = 0.0;
  double initial_queue = 0.0;
  double volume_to_capacity = 0.0;

  double total(double progression_factor) const {
    return uniform * progression_factor + incremental + initial_queue;
  }
};

ControlDelay hcm_control_delay(const SignalCycle& cycle, double lambda_hat, const HcmConfig& cfg);

/// Control delay times arrival rate (Little's law).
Estimate hcm_delay_queue(const SignalCycle& cycle, double lambda_hat, const HcmConfig& cfg);

/// Back of queue lambda (R + g_s) with service time g_s = lambda R / (x_sat - lambda).
Estimate q_back(double lambda_hat, double red, double saturation_flow);

}  // namespace qlest
