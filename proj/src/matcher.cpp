#include "fpguard/matcher.hpp"

#include <cmath>
#include <vector>

#include "fpguard/error.hpp"
#include "fpguard/text.hpp"

namespace fpguard {

WeightTable::WeightTable(double default_weight, std::map<std::string, double> weights)
    : default_weight_(default_weight), weights_(std::move(weights)) {
  auto check = [](const std::string& name, double w) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ConfigError("weight for " + name + " must be finite and non-negative");
    }
  };
  check("default", default_weight_);
  for (const auto& [attribute, w] : weights_) check("'" + attribute + "'", w);
}

double WeightTable::weight(const std::string& attribute) const {
  auto it = weights_.find(attribute);
  return it == weights_.end() ? default_weight_ : it->second;
}

void validate(const CreditParams& params) {
  if (!(params.epsilon > 0.0) || params.epsilon > 1.0) {
    throw ConfigError("epsilon must lie in (0, 1], got " + text::format_number(params.epsilon));
  }
}

Credit credit_detail(double support, double confidence, const CreditParams& params) {
  if (!(support > 0.0) || !(support <= confidence) || !(confidence <= 1.0)) {
    throw ContractError("credit requires 0 < s <= c <= 1, got s=" + text::format_number(support) +
                        " c=" + text::format_number(confidence));
  }
  const double raw = -support * std::log2(1.0 + params.epsilon - confidence);
  if (raw < 0.0) return {0.0, true};
  return {raw + 0.0, false};  // + 0.0 folds -0 at c == epsilon
}

double credit(double support, double confidence, const CreditParams& params) {
  return credit_detail(support, confidence, params).value;
}

MatchResult sim_match_detail(const ItemSet& items, const FpTree& tree,
                             const WeightTable& weights, const CreditParams& params) {
  if (tree.empty()) throw ScoringError("no profile: the tree has seen no transactions");

  const auto& header = tree.header();
  std::vector<char> in_transaction(header.size(), 0);
  std::vector<std::size_t> hits;
  for (const Item& item : items) {
    if (auto rank = tree.header_index(item)) {
      in_transaction[*rank] = 1;
      hits.push_back(*rank);
    }
  }

  MatchResult result;
  const double total = static_cast<double>(tree.total_transactions());
  for (std::size_t rank : hits) {
    const HeaderEntry& entry = header[rank];
    const double item_weight = weights.weight(entry.item.attribute());
    const double item_total = static_cast<double>(entry.total_count);
    double item_credit = 0.0;
    for (NodeId node = entry.chain_head; node != kNoNode; node = tree.next_same_item(node)) {
      bool covered = true;
      for (NodeId up = tree.parent(node); up != kRootNode; up = tree.parent(up)) {
        if (!in_transaction[tree.rank(up)]) {
          covered = false;
          break;
        }
      }
      if (!covered) continue;
      const double count = static_cast<double>(tree.count(node));
      Credit c = credit_detail(count / total, count / item_total, params);
      item_credit += c.value;
      ++result.matched_nodes;
      if (c.clamped) ++result.clamped_nodes;
    }
    result.similarity += item_weight * item_credit;
  }
  return result;
}

double sim_match(const ItemSet& items, const FpTree& tree, const WeightTable& weights,
                 const CreditParams& params) {
  return sim_match_detail(items, tree, weights, params).similarity;
}

double suspicion(double similarity) {
  if (!(similarity >= 0.0)) {
    throw ContractError("similarity must be non-negative, got " + text::format_number(similarity));
  }
  return 1.0 / (1.0 + similarity);
}

SuspicionRecord score(const Transaction& transaction, const FpTree& tree,
                      const WeightTable& weights, const CreditParams& params) {
  SuspicionRecord record;
  record.transaction = transaction;
  record.similarity = sim_match(transaction.items, tree, weights, params);
  record.suspicion = suspicion(record.similarity);
  record.scored_at = transaction.timestamp;
  return record;
}

}  // namespace fpguard
