#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fpguard/core.hpp"
#include "fpguard/error.hpp"

namespace fpguard {
namespace {

TEST(Item, OrderAndValidation) {
  EXPECT_LT(Item("day", "ST"), Item("ip", "1.2"));
  EXPECT_LT(Item("day", "SA"), Item("day", "ST"));
  EXPECT_EQ(Item("day", "ST").to_string(), "day=ST");
  EXPECT_THROW(Item("", "x"), ContractError);
  EXPECT_THROW(Item("day", ""), ContractError);
}

TEST(Transaction, AmountMustBeFiniteAndNonNegative) {
  validate(Transaction{"u", 0, {}, 0.0});
  EXPECT_THROW(validate(Transaction{"u", 0, {}, -1.0}), ContractError);
  EXPECT_THROW(validate(Transaction{"u", 0, {}, NAN}), ContractError);
  EXPECT_THROW(validate(Transaction{"u", 0, {}, INFINITY}), ContractError);
}

TEST(Ratio, PercentAndRationalEquality) {
  EXPECT_EQ((Ratio{2, 3}).percent(), 67);
  EXPECT_EQ((Ratio{1, 3}).percent(), 33);
  EXPECT_EQ((Ratio{2, 5}).percent(), 40);
  EXPECT_EQ((Ratio{2, 4}), (Ratio{1, 2}));
  EXPECT_TRUE((Ratio{1, 3}) <= (Ratio{1, 2}));
}

TEST(Rule, Validation) {
  Rule ok{{Item("a", "1")}, {Item("b", "2")}, {1, 5}, {1, 3}};
  validate(ok);
  Rule overlap = ok;
  overlap.consequent.insert(Item("a", "1"));
  EXPECT_THROW(validate(overlap), ContractError);
  Rule inverted = ok;
  inverted.support = {2, 3};
  inverted.confidence = {1, 3};
  EXPECT_THROW(validate(inverted), ContractError);
}

TEST(Bucket, IntervalsAreLeftClosed) {
  BucketSpec spec = Intervals{{0, 10, 50}, {}};
  EXPECT_EQ(bucket_label(spec, "amount", "0"), "[0,10)");
  EXPECT_EQ(bucket_label(spec, "amount", "9.99"), "[0,10)");
  EXPECT_EQ(bucket_label(spec, "amount", "10"), "[10,50)");
  EXPECT_EQ(bucket_label(spec, "amount", "50"), "[50,inf)");
  EXPECT_EQ(bucket_label(spec, "amount", "-1"), "(-inf,0)");
  EXPECT_THROW(bucket_label(spec, "amount", "ten"), ConfigError);
}

TEST(Bucket, DisplayNamesAreNotIdentities) {
  BucketSpec spec = Intervals{{0, 10, 50}, {"L10", "L50"}};
  EXPECT_EQ(display_label(spec, bucket_label(spec, "amount", "3")), "L10");
  EXPECT_EQ(display_label(spec, bucket_label(spec, "amount", "30")), "L50");
  EXPECT_EQ(display_label(spec, "[50,inf)"), "[50,inf)");
}

TEST(Bucket, FixedWidth) {
  BucketSpec spec = FixedWidth{25.0, 0.0};
  EXPECT_EQ(bucket_label(spec, "x", "0"), "[0,25)");
  EXPECT_EQ(bucket_label(spec, "x", "25"), "[25,50)");
  EXPECT_EQ(bucket_label(spec, "x", "-0.5"), "[-25,0)");
  EXPECT_THROW(validate(BucketSpec{FixedWidth{0.0, 0.0}}), ConfigError);
}

TEST(Bucket, TimeOfDay) {
  BucketSpec coarse = TimeOfDay{TimeOfDay::Resolution::kCoarse};
  EXPECT_EQ(bucket_label(coarse, "time", "21:30"), "Evening");
  EXPECT_EQ(bucket_label(coarse, "time", "05:59"), "Night");
  EXPECT_EQ(bucket_label(coarse, "time", "6"), "Morning");
  EXPECT_EQ(bucket_label(coarse, "time", "12:00:00"), "Afternoon");
  BucketSpec hourly = TimeOfDay{TimeOfDay::Resolution::kHourly};
  EXPECT_EQ(bucket_label(hourly, "time", "21:30"), "9pm");
  EXPECT_EQ(bucket_label(hourly, "time", "0:10"), "12am");
  EXPECT_THROW(bucket_label(hourly, "time", "25:00"), ConfigError);
}

TEST(Bucket, LabelingIsIdempotent) {
  std::vector<BucketSpec> specs = {PassThrough{}, FixedWidth{7.5, 1.0},
                                   Intervals{{0, 10, 50, 100}, {}},
                                   TimeOfDay{TimeOfDay::Resolution::kCoarse},
                                   TimeOfDay{TimeOfDay::Resolution::kHourly}};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(-200.0, 200.0);
  std::uniform_int_distribution<int> hour(0, 23);
  for (const BucketSpec& spec : specs) {
    for (int i = 0; i < 200; ++i) {
      bool clock = std::holds_alternative<TimeOfDay>(spec);
      std::string raw = clock ? std::to_string(hour(rng)) + ":15"
                              : std::to_string(std::round(value(rng) * 100) / 100);
      std::string once = bucket_label(spec, "x", raw);
      EXPECT_EQ(bucket_label(spec, "x", once), once) << raw;
    }
  }
}

TEST(Discretize, NeedsASpecForEveryAttribute) {
  GranularityConfig config;
  config.attributes["amount"] = Intervals{{0, 10}, {}};
  EXPECT_EQ(discretize({{"amount", "5"}}, config), (ItemSet{Item("amount", "[0,10)")}));
  EXPECT_THROW(discretize({{"amount", "5"}, {"ip", "1.2"}}, config), ConfigError);
  config.fallback = PassThrough{};
  EXPECT_EQ(discretize({{"ip", "1.2"}}, config), (ItemSet{Item("ip", "1.2")}));
}

std::vector<Transaction> at_times(std::initializer_list<Timestamp> times) {
  std::vector<Transaction> out;
  for (Timestamp t : times) out.push_back({"u", t, {}, 1.0});
  return out;
}

TEST(WindowSelect, TimeWindowIsOpenOnTheLeft) {
  auto txs = at_times({10, 20, 30, 40});
  auto kept = window_select(txs, TimeWindow{20}, 40);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept.front().timestamp, 30);
  EXPECT_EQ(window_select(txs, TimeWindow{20}, 35).size(), 2u);  // 20 excluded, 40 in future
}

TEST(WindowSelect, CountWindowKeepsTheNewest) {
  auto txs = at_times({10, 20, 30, 40});
  auto kept = window_select(txs, CountWindow{3}, 40);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept.front().timestamp, 20);
  EXPECT_EQ(window_select(txs, CountWindow{10}, 40).size(), 4u);
}

TEST(WindowSelect, RejectsUnsortedAndBadSpecs) {
  auto txs = at_times({10, 5});
  EXPECT_THROW(window_select(txs, CountWindow{3}, 10), ContractError);
  EXPECT_THROW(window_select({}, CountWindow{0}, 10), ConfigError);
  EXPECT_THROW(window_select({}, TimeWindow{0}, 10), ConfigError);
}

}  // namespace
}  // namespace fpguard
