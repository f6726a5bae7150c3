#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fpguard/error.hpp"
#include "fpguard/evaluator.hpp"
#include "support.hpp"

namespace fpguard {
namespace {

constexpr Label F = Label::kFraud;
constexpr Label L = Label::kLegal;

TEST(Roc, PerfectSeparation) {
  std::vector<double> s = {0.9, 0.8, 0.2, 0.1};
  std::vector<Label> l = {F, F, L, L};
  RocCurve c = roc(s, l);
  EXPECT_EQ(c.auc, 1.0);
  EXPECT_TRUE(std::isinf(c.points.front().threshold));
  EXPECT_EQ(c.points.front().false_positive_rate, 0.0);
  EXPECT_EQ(c.points.back().true_positive_rate, 1.0);
  EXPECT_EQ(c.points.back().false_positive_rate, 1.0);
}

TEST(Roc, AllTiedIsOneHalf) {
  std::vector<double> s(6, 0.5);
  std::vector<Label> l = {F, L, L, F, L, L};
  RocCurve c = roc(s, l);
  EXPECT_EQ(c.auc, 0.5);
  EXPECT_EQ(c.points.size(), 2u);
}

TEST(Roc, InvertedIsZero) {
  std::vector<double> s = {0.1, 0.9};
  EXPECT_EQ(roc(s, std::vector<Label>{F, L}).auc, 0.0);
}

TEST(Roc, Errors) {
  std::vector<double> s = {0.1, 0.2};
  EXPECT_THROW(roc(s, std::vector<Label>{F, F}), EvaluationError);
  EXPECT_THROW(roc(s, std::vector<Label>{F}), EvaluationError);
  std::vector<double> nan = {NAN, 0.2};
  EXPECT_THROW(roc(nan, std::vector<Label>{F, L}), EvaluationError);
}

TEST(Roc, AucEqualsMannWhitney) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> n(2, 40);
  std::uniform_int_distribution<int> level(0, 6);  // coarse scores force ties
  for (int round = 0; round < 100; ++round) {
    std::vector<double> s;
    std::vector<Label> l;
    int size = n(rng);
    for (int i = 0; i < size; ++i) {
      s.push_back(level(rng) / 6.0);
      l.push_back(i == 0 ? F : i == 1 ? L : (level(rng) < 2 ? F : L));
    }
    EXPECT_NEAR(roc(s, l).auc, testing::mann_whitney(s, l), 1e-12) << "round " << round;
  }
}

TEST(Roc, CurveIsMonotone) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s;
  std::vector<Label> l;
  for (int i = 0; i < 300; ++i) {
    s.push_back(u(rng));
    l.push_back(u(rng) < 0.2 ? F : L);
  }
  RocCurve c = roc(s, l);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    EXPECT_GE(c.points[i].false_positive_rate, c.points[i - 1].false_positive_rate);
    EXPECT_GE(c.points[i].true_positive_rate, c.points[i - 1].true_positive_rate);
    EXPECT_LT(c.points[i].threshold, c.points[i - 1].threshold);
  }
}

TEST(Outcomes, ThresholdIsInclusive) {
  std::vector<double> s = {0.9, 0.5, 0.5, 0.1};
  std::vector<Label> l = {F, L, F, L};
  EXPECT_EQ(outcomes(s, l, 0.5), (OutcomeMatrix{2, 1, 0, 1}));
  EXPECT_EQ(outcomes(s, l, 0.6), (OutcomeMatrix{1, 0, 1, 2}));
  EXPECT_EQ(outcomes(s, l, 0.6).total(), 4u);
}

TEST(Cost, FullAmountAndFixedModes) {
  OutcomeMatrix m{3, 7, 2, 88};
  CostParams full{2.0, MissCostMode::kFullAmount, 0.0};
  std::vector<double> missed = {100.0, 50.0};
  EXPECT_EQ(total_cost(m, missed, full), 2.0 * 10 + 150.0);
  CostParams fixed{2.0, MissCostMode::kFixedPerMiss, 75.0};
  EXPECT_EQ(total_cost(m, {}, fixed), 2.0 * 10 + 2 * 75.0);
  EXPECT_THROW(total_cost(m, std::vector<double>{1.0}, full), EvaluationError);
  EXPECT_THROW(validate(CostParams{-1.0, MissCostMode::kFullAmount, 0.0}), ConfigError);
}

TEST(Cost, EvaluateAtGathersMissedAmounts) {
  std::vector<double> s = {0.9, 0.2, 0.1};
  std::vector<Label> l = {F, F, L};
  std::vector<double> amounts = {10.0, 300.0, 5.0};
  Evaluation e = evaluate_at(s, l, amounts, 0.5, CostParams{1.0, MissCostMode::kFullAmount, 0});
  EXPECT_EQ(e.matrix, (OutcomeMatrix{1, 0, 1, 1}));
  EXPECT_EQ(e.cost, 1.0 + 300.0);
}

TEST(Cost, CurveEndsWithNoAlerts) {
  std::vector<double> s = {0.9, 0.2, 0.2, 0.1};
  std::vector<Label> l = {F, F, L, L};
  std::vector<double> amounts = {10, 20, 30, 40};
  auto curve = cost_curve(s, l, amounts, CostParams{1.0, MissCostMode::kFullAmount, 0});
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_EQ(curve.front().threshold, 0.1);
  EXPECT_EQ(curve.front().evaluation.cost, 4.0);
  EXPECT_TRUE(std::isinf(curve.back().threshold));
  EXPECT_EQ(curve.back().evaluation.matrix, (OutcomeMatrix{0, 0, 2, 2}));
  EXPECT_EQ(curve.back().evaluation.cost, 30.0);
}

}  // namespace
}  // namespace fpguard
