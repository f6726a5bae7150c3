#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpguard/core.hpp"
#include "fpguard/matcher.hpp"

namespace fpguard {

enum class ExpiringKind { kStep, kNaturalLog, kPolynomial };

// Recency weight over the accumulation window (window_start, window_end],
// i.e. (T2, T1]. Every kind is 0 at or before T2 and at most 1 at T1.
struct ExpiringFunction {
  ExpiringKind kind = ExpiringKind::kStep;
  int degree = 1;  // kPolynomial only
  Timestamp window_start = 0;
  Timestamp window_end = 0;

  static ExpiringFunction step(Timestamp window_start, Timestamp window_end);
  static ExpiringFunction natural_log(Timestamp window_start, Timestamp window_end);
  static ExpiringFunction polynomial(int degree, Timestamp window_start, Timestamp window_end);
};

// Step: 1 after T2. NaturalLog: ln(1 + x(e - 1)). Polynomial: x^degree.
// x = (t - T2) / (T1 - T2). ContractError for t > T1, and for the smooth
// kinds when T2 >= T1.
double expiring_weight(const ExpiringFunction& fn, Timestamp t);

// Sum of suspicion * expiring weight * amount.
double alert_value(std::span<const SuspicionRecord> records, const ExpiringFunction& fn);

struct Threshold {
  double alert_value = 0.0;
  std::string severity;
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

// Ascending alert values; a label's position is its severity rank.
void validate_thresholds(std::span<const Threshold> thresholds);

enum class Anchoring {
  kSliding,          // T2 = T1 - span
  kSinceLastUpdate,  // T2 = T0, the last profile update
};

struct AccumulatorConfig {
  ExpiringKind expiring = ExpiringKind::kStep;
  int degree = 2;
  std::int64_t span_seconds = 7 * 24 * 3600;
  Anchoring anchoring = Anchoring::kSliding;
  std::vector<Threshold> thresholds;

  friend bool operator==(const AccumulatorConfig&, const AccumulatorConfig&) = default;
};

void validate(const AccumulatorConfig& config);

// One entity's accumulation window. Value type: slide() returns the next
// state and leaves this one untouched.
class AlertState {
 public:
  AlertState(AccumulatorConfig config, Timestamp now, Timestamp profile_updated_at = 0);

  // Moves T1 to `now`, evicts records at or before the new T2 and appends
  // the new records that fall inside the window. New records must be sorted
  // and not later than `now`; `now` may not move backwards.
  AlertState slide(Timestamp now, std::span<const SuspicionRecord> new_records) const;

  const std::vector<SuspicionRecord>& records() const { return records_; }
  const AccumulatorConfig& config() const { return config_; }
  Timestamp window_start() const;  // T2
  Timestamp window_end() const { return now_; }  // T1
  Timestamp profile_updated_at() const { return profile_updated_at_; }
  void set_profile_updated_at(Timestamp t) { profile_updated_at_ = t; }

  ExpiringFunction expiring() const;

  friend bool operator==(const AlertState& a, const AlertState& b);

 private:
  AccumulatorConfig config_;
  Timestamp now_;
  Timestamp profile_updated_at_;
  std::vector<SuspicionRecord> records_;
};

struct Firing {
  double alert_value = 0.0;
  std::optional<std::string> severity;
  std::size_t record_count = 0;
};

// Highest severity whose threshold is <= the alert value.
// ConfigError when no thresholds are configured.
Firing fire(const AlertState& state);
std::optional<std::string> classify(double value, std::span<const Threshold> thresholds);

}  // namespace fpguard
