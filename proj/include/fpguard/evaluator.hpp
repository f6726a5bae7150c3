#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpguard/simulator.hpp"

namespace fpguard {

// Fraud is the positive class; a higher score means more fraud-like.
struct RocPoint {
  double threshold = 0.0;  // alert iff score >= threshold; +inf for (0,0)
  double false_positive_rate = 0.0;
  double true_positive_rate = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1)
  double auc = 0.0;              // trapezoidal; tied scores earn half credit
};

// EvaluationError unless both classes are present and sizes match.
RocCurve roc(std::span<const double> scores, std::span<const Label> labels);

struct OutcomeMatrix {
  std::uint64_t hit = 0;          // alert, fraud
  std::uint64_t false_alarm = 0;  // alert, legal
  std::uint64_t miss = 0;         // no alert, fraud
  std::uint64_t normal = 0;       // no alert, legal

  std::uint64_t total() const { return hit + false_alarm + miss + normal; }
  friend bool operator==(const OutcomeMatrix&, const OutcomeMatrix&) = default;
};

// Alert iff score >= threshold.
OutcomeMatrix outcomes(std::span<const double> scores, std::span<const Label> labels,
                       double alert_threshold);

enum class MissCostMode { kFullAmount, kFixedPerMiss };

// Cost of an outcome: every alert (hit or false alarm) costs one challenge;
// every missed fraud costs either its full amount or a fixed value; normal
// transactions cost nothing.
struct CostParams {
  double challenge_cost = 0.0;
  MissCostMode miss_mode = MissCostMode::kFullAmount;
  double fixed_miss_cost = 0.0;
  friend bool operator==(const CostParams&, const CostParams&) = default;
};

void validate(const CostParams& params);

// `missed_fraud_amounts` lists the amount of each missed fraud; in
// kFullAmount mode it must hold exactly matrix.miss entries
// (EvaluationError otherwise).
double total_cost(const OutcomeMatrix& matrix, std::span<const double> missed_fraud_amounts,
                  const CostParams& params);

struct Evaluation {
  OutcomeMatrix matrix;
  double cost = 0.0;
};

// outcomes() plus total_cost() with the missed amounts gathered from
// `amounts` (parallel to scores).
Evaluation evaluate_at(std::span<const double> scores, std::span<const Label> labels,
                       std::span<const double> amounts, double alert_threshold,
                       const CostParams& params);

struct CostPoint {
  double threshold = 0.0;
  Evaluation evaluation;
};

// evaluate_at() at every distinct score plus +inf (no alerts), ascending.
std::vector<CostPoint> cost_curve(std::span<const double> scores, std::span<const Label> labels,
                                  std::span<const double> amounts, const CostParams& params);

}  // namespace fpguard
