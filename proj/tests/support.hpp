#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fpguard/core.hpp"
#include "fpguard/fptree.hpp"
#include "fpguard/matcher.hpp"
#include "fpguard/simulator.hpp"

namespace fpguard::testing {

// The five recent transactions of the worked example. Attribute names are
// chosen so that ties in support (ST/129.138 at 4, EV/ET/L10 at 3) break
// into the order ST, 129.138, EV, ET, L10.
inline std::vector<ItemSet> five_row_example() {
  auto row = [](const char* type, const char* day, const char* time, const char* ip,
                const char* volume) {
    return ItemSet{Item("type", type), Item("day", day), Item("time", time), Item("ip", ip),
                   Item("volume", volume)};
  };
  return {row("ET", "ST", "EV", "129.138", "L50"), row("ET", "ST", "MR", "202.55", "L10"),
          row("ET", "SU", "MR", "129.138", "L50"), row("BK", "ST", "EV", "129.138", "L10"),
          row("CL", "ST", "EV", "129.138", "L10")};
}

inline const Item kST{"day", "ST"};
inline const Item kIp{"ip", "129.138"};
inline const Item kEV{"time", "EV"};
inline const Item kET{"type", "ET"};
inline const Item kL10{"volume", "L10"};

// Random transactions over `item_count` items spread across three
// attributes; each item is present with its own probability.
inline std::vector<ItemSet> random_dataset(std::mt19937_64& rng, std::size_t max_transactions,
                                           std::size_t item_count) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_transactions);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> presence(item_count);
  for (double& p : presence) p = 0.1 + 0.8 * unit(rng);
  std::vector<ItemSet> out(n_dist(rng));
  for (ItemSet& t : out) {
    for (std::size_t i = 0; i < item_count; ++i) {
      if (unit(rng) < presence[i]) {
        t.emplace("a" + std::to_string(i % 3), "v" + std::to_string(i));
      }
    }
  }
  return out;
}

inline MinSupport random_min_sup(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> num(1, 19);
  return MinSupport::from_ratio(num(rng), 20);
}

// L order and filtered lists recomputed from scratch, without the library.
struct OracleFilter {
  std::vector<Item> order;
  std::vector<std::vector<Item>> filtered;
};

inline OracleFilter oracle_filter(const std::vector<ItemSet>& transactions,
                                  std::uint64_t numerator, std::uint64_t denominator) {
  std::map<Item, std::uint64_t> counts;
  for (const ItemSet& t : transactions) {
    for (const Item& item : t) ++counts[item];
  }
  OracleFilter out;
  const std::uint64_t n = transactions.size();
  for (const auto& [item, count] : counts) {
    if (count * denominator >= numerator * n) out.order.push_back(item);
  }
  std::sort(out.order.begin(), out.order.end(), [&](const Item& a, const Item& b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return a < b;
  });
  for (const ItemSet& t : transactions) {
    std::vector<Item> kept;
    for (const Item& item : out.order) {
      if (t.contains(item)) kept.push_back(item);
    }
    out.filtered.push_back(kept);
  }
  return out;
}

// Every non-empty prefix of every filtered list, with the number of lists
// that start with it.
inline std::map<std::vector<Item>, std::uint64_t> oracle_prefix_counts(
    const std::vector<std::vector<Item>>& filtered) {
  std::map<std::vector<Item>, std::uint64_t> out;
  for (const auto& list : filtered) {
    for (std::size_t len = 1; len <= list.size(); ++len) {
      ++out[std::vector<Item>(list.begin(), list.begin() + static_cast<long>(len))];
    }
  }
  return out;
}

// Similarity from a flat list of (root path, count) nodes: every node whose
// item is in T and whose ancestors are all in T contributes
// weight * max(0, -s log2(1 + eps - c)).
inline double oracle_similarity(const ItemSet& t,
                                const std::map<std::vector<Item>, std::uint64_t>& nodes,
                                std::uint64_t total, double epsilon,
                                const std::map<std::string, double>& weights = {}) {
  std::map<Item, std::uint64_t> item_totals;
  for (const auto& [path, count] : nodes) item_totals[path.back()] += count;
  double sum = 0.0;
  for (const auto& [path, count] : nodes) {
    if (!std::all_of(path.begin(), path.end(), [&](const Item& i) { return t.contains(i); })) {
      continue;
    }
    const double s = static_cast<double>(count) / static_cast<double>(total);
    const double c = static_cast<double>(count) / static_cast<double>(item_totals[path.back()]);
    const double g = -s * std::log2(1.0 + epsilon - c);
    auto w = weights.find(path.back().attribute());
    sum += (w == weights.end() ? 1.0 : w->second) * std::max(0.0, g);
  }
  return sum;
}

inline std::map<std::vector<Item>, std::uint64_t> as_map(const std::vector<PathCount>& paths) {
  std::map<std::vector<Item>, std::uint64_t> out;
  for (const PathCount& p : paths) out[p.path] = p.count;
  return out;
}

// Pairwise Mann-Whitney statistic with ties counted one half.
inline double mann_whitney(const std::vector<double>& scores, const std::vector<Label>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != Label::kFraud) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != Label::kLegal) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace fpguard::testing
