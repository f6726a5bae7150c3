#include "fpguard/accumulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "fpguard/error.hpp"
#include "fpguard/text.hpp"

namespace fpguard {

ExpiringFunction ExpiringFunction::step(Timestamp window_start, Timestamp window_end) {
  return {ExpiringKind::kStep, 1, window_start, window_end};
}

ExpiringFunction ExpiringFunction::natural_log(Timestamp window_start, Timestamp window_end) {
  return {ExpiringKind::kNaturalLog, 1, window_start, window_end};
}

ExpiringFunction ExpiringFunction::polynomial(int degree, Timestamp window_start,
                                              Timestamp window_end) {
  if (degree < 1) throw ConfigError("polynomial expiring degree must be at least 1");
  return {ExpiringKind::kPolynomial, degree, window_start, window_end};
}

double expiring_weight(const ExpiringFunction& fn, Timestamp t) {
  if (t > fn.window_end) {
    throw ContractError("transaction at " + std::to_string(t) +
                        " lies after the window end " + std::to_string(fn.window_end));
  }
  if (fn.kind != ExpiringKind::kStep && fn.window_start >= fn.window_end) {
    throw ContractError("expiring window needs T2 < T1");
  }
  if (t <= fn.window_start) return 0.0;
  if (fn.kind == ExpiringKind::kStep) return 1.0;
  const double x = static_cast<double>(t - fn.window_start) /
                   static_cast<double>(fn.window_end - fn.window_start);
  double weight = fn.kind == ExpiringKind::kNaturalLog
                      ? std::log(1.0 + x * (std::numbers::e - 1.0))
                      : std::pow(x, fn.degree);
  return std::clamp(weight, 0.0, 1.0);
}

double alert_value(std::span<const SuspicionRecord> records, const ExpiringFunction& fn) {
  double total = 0.0;
  for (const SuspicionRecord& record : records) {
    total += record.suspicion * expiring_weight(fn, record.scored_at) * record.transaction.amount;
  }
  return total;
}

void validate_thresholds(std::span<const Threshold> thresholds) {
  std::set<std::string> labels;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!std::isfinite(thresholds[i].alert_value)) {
      throw ConfigError("threshold " + std::to_string(i) + " is not finite");
    }
    if (thresholds[i].severity.empty()) {
      throw ConfigError("threshold " + std::to_string(i) + " has no severity label");
    }
    if (!labels.insert(thresholds[i].severity).second) {
      throw ConfigError("severity '" + thresholds[i].severity + "' is listed twice");
    }
    if (i > 0 && !(thresholds[i - 1].alert_value < thresholds[i].alert_value)) {
      throw ConfigError("thresholds must be strictly ascending");
    }
  }
}

void validate(const AccumulatorConfig& config) {
  if (config.span_seconds <= 0) throw ConfigError("accumulation span must be positive");
  if (config.expiring == ExpiringKind::kPolynomial && config.degree < 1) {
    throw ConfigError("polynomial expiring degree must be at least 1");
  }
  validate_thresholds(config.thresholds);
}

AlertState::AlertState(AccumulatorConfig config, Timestamp now, Timestamp profile_updated_at)
    : config_(std::move(config)), now_(now), profile_updated_at_(profile_updated_at) {
  validate(config_);
}

Timestamp AlertState::window_start() const {
  return config_.anchoring == Anchoring::kSliding ? now_ - config_.span_seconds
                                                  : profile_updated_at_;
}

ExpiringFunction AlertState::expiring() const {
  return {config_.expiring, config_.expiring == ExpiringKind::kPolynomial ? config_.degree : 1,
          window_start(), now_};
}

AlertState AlertState::slide(Timestamp now, std::span<const SuspicionRecord> new_records) const {
  if (now < now_) {
    throw ContractError("accumulation window cannot move backwards from " +
                        std::to_string(now_) + " to " + std::to_string(now));
  }
  for (std::size_t i = 0; i < new_records.size(); ++i) {
    if (new_records[i].scored_at > now) {
      throw ContractError("record scored at " + std::to_string(new_records[i].scored_at) +
                          " is later than now (" + std::to_string(now) + ")");
    }
    if (i > 0 && new_records[i].scored_at < new_records[i - 1].scored_at) {
      throw ContractError("new records must be sorted by scoring time");
    }
  }
  AlertState next = *this;
  next.now_ = now;
  const Timestamp start = next.window_start();
  std::erase_if(next.records_,
                [&](const SuspicionRecord& r) { return r.scored_at <= start; });
  for (const SuspicionRecord& record : new_records) {
    if (record.scored_at > start) next.records_.push_back(record);
  }
  return next;
}

bool operator==(const AlertState& a, const AlertState& b) {
  if (!(a.config_ == b.config_) || a.now_ != b.now_ ||
      a.profile_updated_at_ != b.profile_updated_at_ || a.records_.size() != b.records_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.records_.size(); ++i) {
    const auto& x = a.records_[i];
    const auto& y = b.records_[i];
    if (!(x.transaction == y.transaction) || x.similarity != y.similarity ||
        x.suspicion != y.suspicion || x.scored_at != y.scored_at) {
      return false;
    }
  }
  return true;
}

std::optional<std::string> classify(double value, std::span<const Threshold> thresholds) {
  if (thresholds.empty()) throw ConfigError("no alert thresholds configured");
  std::optional<std::string> severity;
  for (const Threshold& threshold : thresholds) {
    if (value >= threshold.alert_value) severity = threshold.severity;
  }
  return severity;
}

Firing fire(const AlertState& state) {
  Firing firing;
  firing.alert_value = alert_value(state.records(), state.expiring());
  firing.severity = classify(firing.alert_value, state.config().thresholds);
  firing.record_count = state.records().size();
  return firing;
}

}  // namespace fpguard
