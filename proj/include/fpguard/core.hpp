#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fpguard {

using Timestamp = std::int64_t;  // epoch seconds

// An attribute-value pair. Values are already discretized bucket labels.
class Item {
 public:
  Item(std::string attribute, std::string value);

  const std::string& attribute() const { return attribute_; }
  const std::string& value() const { return value_; }

  // "attribute=value", unescaped; for diagnostics and display only.
  std::string to_string() const;

  // Attribute first, then value.
  friend auto operator<=>(const Item&, const Item&) = default;
  friend bool operator==(const Item&, const Item&) = default;

 private:
  std::string attribute_;
  std::string value_;
};

using ItemSet = std::set<Item>;

struct Transaction {
  std::string entity_id;
  Timestamp timestamp = 0;
  ItemSet items;
  double amount = 0.0;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

// Throws ContractError if amount is negative or not finite.
void validate(const Transaction& transaction);

struct TimeWindow {
  std::int64_t seconds = 0;
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct CountWindow {
  std::size_t count = 0;
  friend bool operator==(const CountWindow&, const CountWindow&) = default;
};

using WindowSpec = std::variant<TimeWindow, CountWindow>;

void validate(const WindowSpec& spec);

// Exact non-negative ratio; percentages in rule output are derived from it.
struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  // Rounded integer percent, e.g. 2/3 -> 67.
  int percent() const;

  // Equal as rationals, not as representations.
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
  friend bool operator<=(const Ratio& a, const Ratio& b) {
    return a.numerator * b.denominator <= b.numerator * a.denominator;
  }
};

// X -> Y with support s and confidence c.
struct Rule {
  ItemSet antecedent;
  ItemSet consequent;
  Ratio support;
  Ratio confidence;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Throws ContractError unless X and Y are non-empty and disjoint and
// 0 <= s <= c <= 1.
void validate(const Rule& rule);

// Per-attribute bucketing. Numeric buckets are half-open [lo, hi) and their
// canonical label is "[lo,hi)".
struct PassThrough {
  friend bool operator==(const PassThrough&, const PassThrough&) = default;
};

struct FixedWidth {
  double width = 1.0;
  double origin = 0.0;
  friend bool operator==(const FixedWidth&, const FixedWidth&) = default;
};

// Explicit ascending edges. Values below the first edge land in
// "(-inf,e0)", values at or above the last edge in "[eN,inf)".
// `display` optionally names the finite buckets, one per [e_i, e_i+1).
struct Intervals {
  std::vector<double> edges;
  std::vector<std::string> display;
  friend bool operator==(const Intervals&, const Intervals&) = default;
};

// "HH:MM[:SS]" clock times. Coarse: Night [0,6), Morning [6,12),
// Afternoon [12,18), Evening [18,24). Hourly: "12am", "1am", ..., "11pm".
struct TimeOfDay {
  enum class Resolution { kCoarse, kHourly };
  Resolution resolution = Resolution::kCoarse;
  friend bool operator==(const TimeOfDay&, const TimeOfDay&) = default;
};

using BucketSpec = std::variant<PassThrough, FixedWidth, Intervals, TimeOfDay>;

void validate(const BucketSpec& spec);

struct GranularityConfig {
  std::map<std::string, BucketSpec> attributes;
  std::optional<BucketSpec> fallback;

  const BucketSpec* find(std::string_view attribute) const;
  friend bool operator==(const GranularityConfig&, const GranularityConfig&) = default;
};

// Maps one raw value to its canonical bucket label. Canonical labels map to
// themselves.
std::string bucket_label(const BucketSpec& spec, std::string_view attribute,
                         std::string_view raw);

// Human-facing name of a canonical label ("$1-$10" for "[1,10)" when the
// spec carries display names). Falls back to the canonical label.
std::string display_label(const BucketSpec& spec, std::string_view canonical);

// Throws ConfigError naming the first attribute with no spec and no fallback.
ItemSet discretize(const std::map<std::string, std::string>& raw_record,
                   const GranularityConfig& config);

// Transactions must be sorted by timestamp (ContractError otherwise).
// TimeWindow keeps (now - seconds, now]; CountWindow keeps the last n.
std::vector<Transaction> window_select(std::span<const Transaction> transactions,
                                       const WindowSpec& spec, Timestamp now);

}  // namespace fpguard
