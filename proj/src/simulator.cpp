#include "fpguard/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "fpguard/error.hpp"
#include "fpguard/text.hpp"

namespace fpguard {

namespace {

constexpr std::int64_t kDay = 24 * 3600;
constexpr std::int64_t kWeek = 7 * kDay;
constexpr const char* kDayNames[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
constexpr const char* kDayParts[] = {"Night", "Morning", "Afternoon", "Evening"};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits -> [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::int64_t below(std::int64_t n) {
    auto k = static_cast<std::int64_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
  }

  // Inverse CDF over non-negative weights with a positive sum.
  std::size_t pick(std::span<const double> weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = uniform() * total;
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = i;
      running += weights[i];
      if (u < running) return i;
    }
    return last_positive;
  }

 private:
  std::mt19937_64 engine_;
};

void check_distribution(const std::string& what, std::span<const double> weights,
                        std::size_t expected_size) {
  if (weights.size() != expected_size) {
    throw ConfigError(what + ": expected " + std::to_string(expected_size) + " weights, got " +
                      std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ConfigError(what + ": negative or non-finite weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError(what + ": weights sum to " + text::format_number(sum) + ", not 1");
  }
}

void check_categorical(const std::string& what, const Categorical& c) {
  if (c.values.empty()) throw ConfigError(what + ": no values");
  check_distribution(what, c.weights, c.values.size());
  for (const auto& v : c.values) {
    if (v.empty()) throw ConfigError(what + ": empty value");
  }
}

struct Draw {
  Timestamp timestamp;
  ItemSet items;
  double amount;
};

Timestamp first_monday_at_or_after(Timestamp start) {
  std::int64_t days = floor_div(start, kDay);
  Timestamp midnight = days * kDay;
  int dow = day_of_week(start);
  Timestamp monday = midnight - dow * kDay;
  return monday < start ? monday + kWeek : monday;
}

Draw draw_one(const BehaviorProfile& profile, Rng& rng, Timestamp base, std::int64_t weeks) {
  Draw draw;
  const std::int64_t week = rng.below(weeks);
  const auto day = static_cast<std::int64_t>(rng.pick(profile.timing.day_of_week));
  const auto hour = static_cast<std::int64_t>(rng.pick(profile.timing.hour_of_day));
  const std::int64_t second = rng.below(3600);
  draw.timestamp = base + week * kWeek + day * kDay + hour * 3600 + second;
  draw.items.emplace("day", kDayNames[day]);
  draw.items.emplace("time", kDayParts[hour / 6]);

  if (profile.ip.kind == IpModel::Kind::kSmallStableGroup) {
    draw.items.emplace("ip", profile.ip.group.values[rng.pick(profile.ip.group.weights)]);
  } else {
    const int span = profile.ip.first_octet_max - profile.ip.first_octet_min + 1;
    const auto a = profile.ip.first_octet_min + rng.below(span);
    const auto b = rng.below(256);
    draw.items.emplace("ip", std::to_string(a) + "." + std::to_string(b));
  }

  for (const auto& [attribute, dist] : profile.attributes) {
    std::vector<double> weights = dist.weights;
    for (const Correlation& rule : profile.correlations) {
      if (rule.boosted.attribute() != attribute) continue;
      bool holds = std::all_of(rule.condition.begin(), rule.condition.end(),
                               [&](const Item& item) { return draw.items.contains(item); });
      if (!holds) continue;
      for (std::size_t i = 0; i < dist.values.size(); ++i) {
        if (dist.values[i] == rule.boosted.value()) weights[i] *= rule.factor;
      }
    }
    draw.items.emplace(attribute, dist.values[rng.pick(weights)]);
  }

  const std::size_t bucket = rng.pick(profile.amount.weights);
  const double lo = profile.amount.edges[bucket];
  const double hi = profile.amount.edges[bucket + 1];
  double amount = std::floor((lo + rng.uniform() * (hi - lo)) * 100.0) / 100.0;
  draw.amount = std::clamp(amount, lo, hi);
  return draw;
}

Categorical categorical(std::vector<std::string> values, std::vector<double> raw) {
  double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (double& w : raw) w /= sum;
  return {std::move(values), std::move(raw)};
}

template <std::size_t N>
std::array<double, N> normalized(const std::array<double, N>& raw) {
  std::array<double, N> out{};
  double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (std::size_t i = 0; i < N; ++i) out[i] = raw[i] / sum;
  return out;
}

}  // namespace

int day_of_week(Timestamp t) {
  // 1970-01-01 was a Thursday.
  std::int64_t days = floor_div(t, kDay);
  return static_cast<int>(((days + 3) % 7 + 7) % 7);
}

int hour_of_day(Timestamp t) {
  std::int64_t seconds = t - floor_div(t, kDay) * kDay;
  return static_cast<int>(seconds / 3600);
}

void validate(const BehaviorProfile& profile) {
  const std::string where = "profile '" + profile.name + "'";
  check_distribution(where + " day_of_week", profile.timing.day_of_week, 7);
  check_distribution(where + " hour_of_day", profile.timing.hour_of_day, 24);
  if (!(profile.timing.transactions_per_week > 0.0)) {
    throw ConfigError(where + ": transactions_per_week must be positive");
  }
  if (profile.amount.edges.size() < 2) throw ConfigError(where + " amount: need two edges");
  for (std::size_t i = 1; i < profile.amount.edges.size(); ++i) {
    if (!(profile.amount.edges[i - 1] < profile.amount.edges[i]) || profile.amount.edges[0] < 0.0) {
      throw ConfigError(where + " amount: edges must be non-negative and ascending");
    }
  }
  check_distribution(where + " amount", profile.amount.weights, profile.amount.edges.size() - 1);
  if (profile.ip.kind == IpModel::Kind::kSmallStableGroup) {
    check_categorical(where + " ip group", profile.ip.group);
  } else if (profile.ip.first_octet_min < 0 || profile.ip.first_octet_max > 255 ||
             profile.ip.first_octet_min > profile.ip.first_octet_max) {
    throw ConfigError(where + " ip: bad first-octet range");
  }
  for (const auto& [attribute, dist] : profile.attributes) {
    if (attribute == "day" || attribute == "time" || attribute == "ip" || attribute.empty()) {
      throw ConfigError(where + ": attribute name '" + attribute + "' is reserved or empty");
    }
    check_categorical(where + " attribute '" + attribute + "'", dist);
  }
  for (const Correlation& rule : profile.correlations) {
    if (!(rule.factor >= 1.0) || !std::isfinite(rule.factor)) {
      throw ConfigError(where + ": boost factor for " + rule.boosted.to_string() +
                        " must be finite and >= 1");
    }
  }
}

LabeledDataset generate(const BehaviorProfile& profile, std::size_t n_legal,
                        std::size_t n_fraud, const BehaviorProfile& fraud_profile,
                        std::uint64_t seed, const GenerateOptions& options) {
  validate(profile);
  validate(fraud_profile);
  LabeledDataset dataset;
  const std::size_t total = n_legal + n_fraud;
  if (total == 0) return dataset;

  const auto weeks = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(
             std::ceil(static_cast<double>(total) / profile.timing.transactions_per_week)));
  const Timestamp base = first_monday_at_or_after(options.start);

  Rng rng(seed);
  // (timestamp, label, draw order) gives a total order for the merge.
  std::vector<std::tuple<Timestamp, Label, std::size_t, Draw>> draws;
  draws.reserve(total);
  for (std::size_t i = 0; i < n_legal; ++i) {
    Draw d = draw_one(profile, rng, base, weeks);
    draws.emplace_back(d.timestamp, Label::kLegal, i, std::move(d));
  }
  for (std::size_t i = 0; i < n_fraud; ++i) {
    Draw d = draw_one(fraud_profile, rng, base, weeks);
    draws.emplace_back(d.timestamp, Label::kFraud, i, std::move(d));
  }
  std::sort(draws.begin(), draws.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
  });

  dataset.transactions.reserve(total);
  dataset.labels.reserve(total);
  for (auto& [timestamp, label, order, draw] : draws) {
    dataset.transactions.push_back(
        Transaction{options.entity_id, timestamp, std::move(draw.items), draw.amount});
    dataset.labels.push_back(label);
  }
  return dataset;
}

std::map<std::string, BehaviorProfile> builtin_profiles() {
  // Weekend-heavy week; Saturday and Sunday carry 80% of the mass.
  const std::array<double, 7> weekend = {0.04, 0.04, 0.04, 0.04, 0.04, 0.40, 0.40};
  // Evening-heavy day: 18:00-23:00 carries most of the mass.
  const auto evening = normalized<24>({0.2, 0.1, 0.1, 0.1, 0.1, 0.2,   // 0-5
                                       0.5, 0.8, 1.0, 1.0, 1.0, 1.5,   // 6-11
                                       2.0, 2.0, 2.0, 2.0, 2.5, 3.5,   // 12-17
                                       9.0, 11.0, 12.0, 11.0, 8.0, 4.0});  // 18-23
  std::array<double, 24> flat_hours{};
  flat_hours.fill(1.0 / 24.0);
  std::array<double, 7> flat_days{};
  flat_days.fill(1.0 / 7.0);

  const AmountModel everyday{{0, 10, 50, 100, 500, 2000}, {0.30, 0.45, 0.20, 0.05, 0.0}};
  const Categorical products = categorical({"books", "music", "movies", "games"},
                                           {0.50, 0.30, 0.16, 0.04});
  const std::vector<Correlation> product_habits = {
      {{Item("time", "Evening")}, Item("product", "movies"), 2.0},
      {{Item("day", "Sat")}, Item("product", "books"), 1.5},
  };

  std::map<std::string, BehaviorProfile> profiles;

  BehaviorProfile regular;
  regular.name = "regular";
  regular.attributes = {{"product", products}};
  regular.correlations = product_habits;
  regular.timing = {weekend, evening, 60.0};
  regular.amount = everyday;
  regular.ip.kind = IpModel::Kind::kSmallStableGroup;
  regular.ip.group = categorical({"129.138", "129.139", "66.102"}, {0.76, 0.20, 0.04});
  profiles.emplace(regular.name, regular);

  BehaviorProfile irregular = regular;
  irregular.name = "irregular";
  irregular.timing = {weekend, flat_hours, 60.0};
  irregular.ip = IpModel{IpModel::Kind::kDynamicPerTransaction, {}, 1, 199};
  profiles.emplace(irregular.name, irregular);

  BehaviorProfile fraud;
  fraud.name = "fraud";
  fraud.attributes = {{"product", categorical({"electronics", "giftcards", "jewelry"},
                                              {0.40, 0.35, 0.25})}};
  fraud.timing = {flat_days, flat_hours, 60.0};
  fraud.amount = AmountModel{{0, 10, 50, 100, 500, 2000}, {0.05, 0.10, 0.25, 0.40, 0.20}};
  fraud.ip = IpModel{IpModel::Kind::kDynamicPerTransaction, {}, 200, 223};
  profiles.emplace(fraud.name, fraud);

  return profiles;
}

}  // namespace fpguard
