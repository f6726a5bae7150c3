#pragma once

#include <map>
#include <string>

#include "fpguard/core.hpp"
#include "fpguard/fptree.hpp"

namespace fpguard {

// Per-attribute stress applied to an item's credit.
class WeightTable {
 public:
  WeightTable() = default;
  explicit WeightTable(double default_weight, std::map<std::string, double> weights = {});

  double weight(const std::string& attribute) const;
  double default_weight() const { return default_weight_; }
  const std::map<std::string, double>& overrides() const { return weights_; }

  friend bool operator==(const WeightTable&, const WeightTable&) = default;

 private:
  double default_weight_ = 1.0;
  std::map<std::string, double> weights_;
};

// epsilon bounds the credit of a single node at -log2(epsilon).
struct CreditParams {
  double epsilon = 0.01;
  friend bool operator==(const CreditParams&, const CreditParams&) = default;
};

void validate(const CreditParams& params);

struct Credit {
  double value = 0.0;
  bool clamped = false;  // raw value was negative (confidence < epsilon)
};

// G(s, c) = -s * log2(1 + epsilon - c), clamped at 0. Requires
// 0 < s <= c <= 1 (ContractError otherwise).
Credit credit_detail(double support, double confidence, const CreditParams& params);
double credit(double support, double confidence, const CreditParams& params);

struct MatchResult {
  double similarity = 0.0;
  std::size_t matched_nodes = 0;  // chain nodes whose prefix path is in T
  std::size_t clamped_nodes = 0;
};

// Similarity of `items` to the profile: for each item of T in the header,
// sum weight * G(s, c) over its chain nodes whose prefix path is a subset
// of T. Node support and confidence are read from live counts.
// Throws ScoringError when the tree has seen no transactions.
MatchResult sim_match_detail(const ItemSet& items, const FpTree& tree,
                             const WeightTable& weights, const CreditParams& params);
double sim_match(const ItemSet& items, const FpTree& tree, const WeightTable& weights,
                 const CreditParams& params);

// 1 / (1 + similarity): 1 when nothing matched, falling towards 0.
double suspicion(double similarity);

struct SuspicionRecord {
  Transaction transaction;
  double similarity = 0.0;
  double suspicion = 1.0;
  Timestamp scored_at = 0;
};

SuspicionRecord score(const Transaction& transaction, const FpTree& tree,
                      const WeightTable& weights, const CreditParams& params);

}  // namespace fpguard
