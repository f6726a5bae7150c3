#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fpguard/core.hpp"

namespace fpguard {

struct Categorical {
  std::vector<std::string> values;
  std::vector<double> weights;  // must sum to 1
  friend bool operator==(const Categorical&, const Categorical&) = default;
};

// When every condition item is already drawn, the boosted item's weight is
// multiplied by `factor` before its attribute is sampled.
struct Correlation {
  std::vector<Item> condition;
  Item boosted;
  double factor = 1.0;
  friend bool operator==(const Correlation&, const Correlation&) = default;
};

// Monday first. Emits the derived items day=<Mon..Sun> and
// time=<Night|Morning|Afternoon|Evening>.
struct SessionTiming {
  std::array<double, 7> day_of_week{};
  std::array<double, 24> hour_of_day{};
  double transactions_per_week = 20.0;
  friend bool operator==(const SessionTiming&, const SessionTiming&) = default;
};

// Bucket i is drawn with weights[i], then the amount is uniform in
// [edges[i], edges[i+1]) rounded down to cents.
struct AmountModel {
  std::vector<double> edges;
  std::vector<double> weights;
  friend bool operator==(const AmountModel&, const AmountModel&) = default;
};

// Source address bucket (a /16 prefix such as "129.138").
struct IpModel {
  enum class Kind { kSmallStableGroup, kDynamicPerTransaction };
  Kind kind = Kind::kSmallStableGroup;
  Categorical group;  // kSmallStableGroup
  int first_octet_min = 1;  // kDynamicPerTransaction: uniform a.b with a in [min, max]
  int first_octet_max = 223;
  friend bool operator==(const IpModel&, const IpModel&) = default;
};

struct BehaviorProfile {
  std::string name;
  // Sampled in this order, after timing and ip.
  std::vector<std::pair<std::string, Categorical>> attributes;
  std::vector<Correlation> correlations;
  SessionTiming timing;
  AmountModel amount;
  IpModel ip;
  friend bool operator==(const BehaviorProfile&, const BehaviorProfile&) = default;
};

// ConfigError naming the first distribution that does not sum to 1 within
// 1e-9, a negative weight, a boost factor below 1, or a malformed model.
void validate(const BehaviorProfile& profile);

enum class Label { kLegal, kFraud };

struct LabeledDataset {
  std::vector<Transaction> transactions;
  std::vector<Label> labels;
};

struct GenerateOptions {
  std::string entity_id = "u1";
  Timestamp start = 1230768000;  // 2009-01-01T00:00:00Z
};

// Draws n_legal transactions from `profile` and n_fraud from
// `fraud_profile` over the same span of weeks and merges them by time.
// All randomness comes from a std::mt19937_64 seeded with `seed`, and every
// draw maps raw generator output through code in this module, so output is
// identical across standard libraries.
LabeledDataset generate(const BehaviorProfile& profile, std::size_t n_legal,
                        std::size_t n_fraud, const BehaviorProfile& fraud_profile,
                        std::uint64_t seed, const GenerateOptions& options = {});

// "regular", "irregular" and "fraud".
std::map<std::string, BehaviorProfile> builtin_profiles();

// Day-of-week (0 = Monday) and hour of a UTC timestamp.
int day_of_week(Timestamp t);
int hour_of_day(Timestamp t);

}  // namespace fpguard
