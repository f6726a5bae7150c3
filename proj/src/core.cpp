#include "fpguard/core.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "fpguard/error.hpp"
#include "fpguard/text.hpp"

namespace fpguard {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig: return "config";
    case ErrorCategory::kContract: return "contract";
    case ErrorCategory::kFormat: return "format";
    case ErrorCategory::kScoring: return "scoring";
    case ErrorCategory::kEmptyProfile: return "empty-profile";
    case ErrorCategory::kEvaluation: return "evaluation";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

Item::Item(std::string attribute, std::string value)
    : attribute_(std::move(attribute)), value_(std::move(value)) {
  if (attribute_.empty()) throw ContractError("item attribute must be non-empty");
  if (value_.empty()) {
    throw ContractError("item '" + attribute_ + "' has an empty value");
  }
}

std::string Item::to_string() const { return attribute_ + "=" + value_; }

void validate(const Transaction& transaction) {
  if (!std::isfinite(transaction.amount) || transaction.amount < 0.0) {
    throw ContractError("transaction amount must be a finite non-negative number, got " +
                        text::format_number(transaction.amount));
  }
}

void validate(const WindowSpec& spec) {
  if (const auto* time = std::get_if<TimeWindow>(&spec)) {
    if (time->seconds <= 0) throw ConfigError("time window duration must be positive");
  } else if (std::get<CountWindow>(spec).count < 1) {
    throw ConfigError("count window size must be at least 1");
  }
}

int Ratio::percent() const {
  return static_cast<int>(std::lround(100.0 * value()));
}

void validate(const Rule& rule) {
  if (rule.antecedent.empty()) throw ContractError("rule antecedent is empty");
  if (rule.consequent.empty()) throw ContractError("rule consequent is empty");
  for (const Item& item : rule.antecedent) {
    if (rule.consequent.contains(item)) {
      throw ContractError("rule antecedent and consequent share " + item.to_string());
    }
  }
  if (rule.support.denominator == 0 || rule.confidence.denominator == 0) {
    throw ContractError("rule measure has a zero denominator");
  }
  if (!(rule.support <= rule.confidence) || !(rule.confidence <= Ratio{1, 1})) {
    throw ContractError("rule measures violate s <= c <= 1");
  }
}

namespace {

// Canonical "[lo,hi)" label; infinite ends render as -inf / inf.
std::string interval_label(double lo, double hi) {
  std::string out = std::isinf(lo) ? "(-inf" : "[" + text::format_number(lo);
  out += ",";
  out += std::isinf(hi) ? "inf" : text::format_number(hi);
  out += ")";
  return out;
}

std::string fixed_width_label(const FixedWidth& spec, double x) {
  double index = std::floor((x - spec.origin) / spec.width);
  double lo = spec.origin + index * spec.width;
  double hi = spec.origin + (index + 1.0) * spec.width;
  // Guard against x landing a rounding step outside [lo, hi).
  if (x < lo) {
    hi = lo;
    lo = spec.origin + (index - 1.0) * spec.width;
  } else if (x >= hi) {
    lo = hi;
    hi = spec.origin + (index + 2.0) * spec.width;
  }
  return interval_label(lo, hi);
}

std::string intervals_label(const Intervals& spec, double x) {
  const auto& e = spec.edges;
  auto upper = std::upper_bound(e.begin(), e.end(), x);
  if (upper == e.begin()) return interval_label(-INFINITY, e.front());
  if (upper == e.end()) return interval_label(e.back(), INFINITY);
  return interval_label(*std::prev(upper), *upper);
}

std::vector<std::string> intervals_labels(const Intervals& spec) {
  std::vector<std::string> labels;
  labels.push_back(interval_label(-INFINITY, spec.edges.front()));
  for (std::size_t i = 0; i + 1 < spec.edges.size(); ++i) {
    labels.push_back(interval_label(spec.edges[i], spec.edges[i + 1]));
  }
  labels.push_back(interval_label(spec.edges.back(), INFINITY));
  return labels;
}

constexpr const char* kCoarseLabels[] = {"Night", "Morning", "Afternoon", "Evening"};

std::string hourly_label(int hour) {
  int twelve = hour % 12 == 0 ? 12 : hour % 12;
  return std::to_string(twelve) + (hour < 12 ? "am" : "pm");
}

bool is_time_label(const TimeOfDay& spec, std::string_view raw) {
  if (spec.resolution == TimeOfDay::Resolution::kCoarse) {
    return std::find(std::begin(kCoarseLabels), std::end(kCoarseLabels), raw) !=
           std::end(kCoarseLabels);
  }
  for (int h = 0; h < 24; ++h) {
    if (hourly_label(h) == raw) return true;
  }
  return false;
}

std::optional<int> parse_hour(std::string_view raw) {
  std::size_t colon = raw.find(':');
  auto hour = text::parse_integer(raw.substr(0, colon));
  if (!hour || *hour < 0 || *hour > 23) return std::nullopt;
  if (colon != std::string_view::npos) {
    std::string_view rest = raw.substr(colon + 1);
    std::size_t second_colon = rest.find(':');
    auto minute = text::parse_integer(rest.substr(0, second_colon));
    if (!minute || *minute < 0 || *minute > 59) return std::nullopt;
    if (second_colon != std::string_view::npos) {
      auto second = text::parse_integer(rest.substr(second_colon + 1));
      if (!second || *second < 0 || *second > 59) return std::nullopt;
    }
  }
  return static_cast<int>(*hour);
}

double require_number(std::string_view attribute, std::string_view raw) {
  auto value = text::parse_number(raw);
  if (!value) {
    throw ConfigError("attribute '" + std::string(attribute) + "': value '" +
                      std::string(raw) + "' is not numeric");
  }
  return *value;
}

}  // namespace

void validate(const BucketSpec& spec) {
  if (const auto* width = std::get_if<FixedWidth>(&spec)) {
    if (!(width->width > 0.0) || !std::isfinite(width->width) ||
        !std::isfinite(width->origin)) {
      throw ConfigError("fixed-width bucket needs a finite positive width");
    }
  } else if (const auto* intervals = std::get_if<Intervals>(&spec)) {
    if (intervals->edges.empty()) throw ConfigError("interval bucket needs at least one edge");
    for (std::size_t i = 0; i < intervals->edges.size(); ++i) {
      if (!std::isfinite(intervals->edges[i]) ||
          (i > 0 && !(intervals->edges[i - 1] < intervals->edges[i]))) {
        throw ConfigError("interval edges must be finite and strictly ascending");
      }
    }
    if (!intervals->display.empty() &&
        intervals->display.size() + 1 != intervals->edges.size()) {
      throw ConfigError("interval display names must number one fewer than the edges");
    }
  }
}

const BucketSpec* GranularityConfig::find(std::string_view attribute) const {
  auto it = attributes.find(std::string(attribute));
  if (it != attributes.end()) return &it->second;
  return fallback ? &*fallback : nullptr;
}

std::string bucket_label(const BucketSpec& spec, std::string_view attribute,
                         std::string_view raw) {
  return std::visit(
      [&](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PassThrough>) {
          return std::string(raw);
        } else if constexpr (std::is_same_v<S, FixedWidth>) {
          if (!raw.empty() && raw.front() == '[') {
            // Already a label: identity if it is one of ours.
            std::size_t comma = raw.find(',');
            if (auto lo = text::parse_number(raw.substr(1, comma - 1))) {
              if (fixed_width_label(s, *lo) == raw) return std::string(raw);
            }
          }
          return fixed_width_label(s, require_number(attribute, raw));
        } else if constexpr (std::is_same_v<S, Intervals>) {
          for (const std::string& label : intervals_labels(s)) {
            if (label == raw) return label;
          }
          return intervals_label(s, require_number(attribute, raw));
        } else {
          if (is_time_label(s, raw)) return std::string(raw);
          auto hour = parse_hour(raw);
          if (!hour) {
            throw ConfigError("attribute '" + std::string(attribute) + "': value '" +
                              std::string(raw) + "' is not a clock time");
          }
          if (s.resolution == TimeOfDay::Resolution::kHourly) return hourly_label(*hour);
          return kCoarseLabels[*hour / 6];
        }
      },
      spec);
}

std::string display_label(const BucketSpec& spec, std::string_view canonical) {
  if (const auto* intervals = std::get_if<Intervals>(&spec); intervals &&
                                                             !intervals->display.empty()) {
    auto labels = intervals_labels(*intervals);
    // labels[0] is the underflow bucket; finite buckets start at 1.
    for (std::size_t i = 1; i + 1 < labels.size(); ++i) {
      if (labels[i] == canonical) return intervals->display[i - 1];
    }
  }
  return std::string(canonical);
}

ItemSet discretize(const std::map<std::string, std::string>& raw_record,
                   const GranularityConfig& config) {
  ItemSet items;
  for (const auto& [attribute, raw] : raw_record) {
    const BucketSpec* spec = config.find(attribute);
    if (spec == nullptr) {
      throw ConfigError("no granularity spec for attribute '" + attribute + "'");
    }
    items.emplace(attribute, bucket_label(*spec, attribute, raw));
  }
  return items;
}

std::vector<Transaction> window_select(std::span<const Transaction> transactions,
                                       const WindowSpec& spec, Timestamp now) {
  validate(spec);
  for (std::size_t i = 1; i < transactions.size(); ++i) {
    if (transactions[i].timestamp < transactions[i - 1].timestamp) {
      throw ContractError("window_select requires transactions sorted by timestamp");
    }
  }
  if (const auto* count = std::get_if<CountWindow>(&spec)) {
    std::size_t keep = std::min(count->count, transactions.size());
    auto tail = transactions.last(keep);
    return {tail.begin(), tail.end()};
  }
  const std::int64_t seconds = std::get<TimeWindow>(spec).seconds;
  const Timestamp oldest_excluded = now - seconds;
  auto first = std::upper_bound(
      transactions.begin(), transactions.end(), oldest_excluded,
      [](Timestamp t, const Transaction& tx) { return t < tx.timestamp; });
  auto last = std::upper_bound(
      transactions.begin(), transactions.end(), now,
      [](Timestamp t, const Transaction& tx) { return t < tx.timestamp; });
  if (last < first) last = first;
  return {first, last};
}

}  // namespace fpguard
