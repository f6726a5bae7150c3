#include "fpguard/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fpguard/error.hpp"

namespace fpguard {

namespace {

void check_parallel(std::size_t scores, std::size_t labels) {
  if (scores != labels) {
    throw EvaluationError("got " + std::to_string(scores) + " scores but " +
                          std::to_string(labels) + " labels");
  }
}

}  // namespace

RocCurve roc(std::span<const double> scores, std::span<const Label> labels) {
  check_parallel(scores.size(), labels.size());
  const auto positives = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), Label::kFraud));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw EvaluationError("ROC needs both fraud and legal labels (AUC undefined)");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw EvaluationError("score is NaN");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  // Integrate in counts and divide once at the end.
  double area = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    const std::size_t tp_before = tp;
    const std::size_t fp_before = fp;
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (labels[order[i]] == Label::kFraud ? tp : fp) += 1;
    }
    area += static_cast<double>(fp - fp_before) * static_cast<double>(tp + tp_before) / 2.0;
    curve.points.push_back({threshold, static_cast<double>(fp) / n, static_cast<double>(tp) / p});
  }
  curve.auc = area / (p * n);
  return curve;
}

OutcomeMatrix outcomes(std::span<const double> scores, std::span<const Label> labels,
                       double alert_threshold) {
  check_parallel(scores.size(), labels.size());
  OutcomeMatrix matrix;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool alert = scores[i] >= alert_threshold;
    const bool fraud = labels[i] == Label::kFraud;
    if (alert) {
      ++(fraud ? matrix.hit : matrix.false_alarm);
    } else {
      ++(fraud ? matrix.miss : matrix.normal);
    }
  }
  return matrix;
}

void validate(const CostParams& params) {
  if (!(params.challenge_cost >= 0.0) || !std::isfinite(params.challenge_cost)) {
    throw ConfigError("challenge_cost must be finite and non-negative");
  }
  if (!std::isfinite(params.fixed_miss_cost) || params.fixed_miss_cost < 0.0) {
    throw ConfigError("fixed miss cost must be finite and non-negative");
  }
}

double total_cost(const OutcomeMatrix& matrix, std::span<const double> missed_fraud_amounts,
                  const CostParams& params) {
  validate(params);
  double cost = params.challenge_cost * static_cast<double>(matrix.hit + matrix.false_alarm);
  if (params.miss_mode == MissCostMode::kFixedPerMiss) {
    return cost + params.fixed_miss_cost * static_cast<double>(matrix.miss);
  }
  if (missed_fraud_amounts.size() != matrix.miss) {
    throw EvaluationError("full-amount cost needs " + std::to_string(matrix.miss) +
                          " missed fraud amounts, got " +
                          std::to_string(missed_fraud_amounts.size()));
  }
  for (double amount : missed_fraud_amounts) cost += amount;
  return cost;
}

Evaluation evaluate_at(std::span<const double> scores, std::span<const Label> labels,
                       std::span<const double> amounts, double alert_threshold,
                       const CostParams& params) {
  Evaluation result;
  result.matrix = outcomes(scores, labels, alert_threshold);
  std::vector<double> missed;
  if (params.miss_mode == MissCostMode::kFullAmount) {
    if (amounts.size() != scores.size()) {
      throw EvaluationError("full-amount cost needs one amount per scored record");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (labels[i] == Label::kFraud && !(scores[i] >= alert_threshold)) {
        missed.push_back(amounts[i]);
      }
    }
  }
  result.cost = total_cost(result.matrix, missed, params);
  return result;
}

std::vector<CostPoint> cost_curve(std::span<const double> scores, std::span<const Label> labels,
                                  std::span<const double> amounts, const CostParams& params) {
  std::vector<double> thresholds(scores.begin(), scores.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());
  std::vector<CostPoint> curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    curve.push_back({t, evaluate_at(scores, labels, amounts, t, params)});
  }
  return curve;
}

}  // namespace fpguard
