#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpguard/core.hpp"

namespace fpguard {

// Minimum support as an exact fraction in (0, 1]. An item with frequency f
// out of N transactions is frequent iff f >= min_sup * N, compared exactly.
class MinSupport {
 public:
  // 5%: rules below this support are not worth profiling.
  MinSupport() : numerator_(1), denominator_(20) {}

  static MinSupport from_ratio(std::uint64_t numerator, std::uint64_t denominator);
  // Accepts "0.6", "60%" or "3/5".
  static MinSupport parse(std::string_view text);
  // Goes through the shortest decimal form, so 0.6 becomes exactly 3/5.
  static MinSupport from_double(double value);

  bool is_frequent(std::uint64_t frequency, std::uint64_t total) const;
  // Smallest frequency that passes, i.e. ceil(min_sup * total).
  std::uint64_t threshold(std::uint64_t total) const;

  double value() const {
    return static_cast<double>(numerator_) / static_cast<double>(denominator_);
  }
  std::uint64_t numerator() const { return numerator_; }
  std::uint64_t denominator() const { return denominator_; }
  // "num/den" in lowest terms.
  std::string to_string() const;

  friend bool operator==(const MinSupport&, const MinSupport&) = default;

 private:
  MinSupport(std::uint64_t numerator, std::uint64_t denominator)
      : numerator_(numerator), denominator_(denominator) {}

  std::uint64_t numerator_;
  std::uint64_t denominator_;
};

struct ItemCount {
  Item item;
  std::uint64_t count = 0;
  friend bool operator==(const ItemCount&, const ItemCount&) = default;
};

// The frequent-item list L (count descending, ties by Item order) and each
// transaction reduced to its frequent items in L order.
struct FrequentItems {
  std::vector<ItemCount> order;
  std::vector<std::vector<Item>> filtered;
};

FrequentItems frequent_filter(std::span<const ItemSet> transactions, MinSupport min_sup);

using NodeId = std::uint32_t;
inline constexpr NodeId kRootNode = 0;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct HeaderEntry {
  Item item;
  std::uint64_t total_count = 0;
  NodeId chain_head = kNoNode;
};

struct TreeStats {
  std::size_t node_count = 0;
  std::size_t depth = 0;
  std::size_t header_size = 0;
  friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

struct PathCount {
  std::vector<Item> path;  // root-to-node, root excluded
  std::uint64_t count = 0;
  friend auto operator<=>(const PathCount&, const PathCount&) = default;
};

struct PreorderEntry {
  std::size_t depth = 0;  // root's children have depth 1
  Item item;
  std::uint64_t count = 0;
  friend bool operator==(const PreorderEntry&, const PreorderEntry&) = default;
};

// Per-entity behavior profile: a prefix tree over L-ordered frequent items
// with a header table threading every node of an item into one chain.
//
// The L order is frozen at build time. Incremental inserts keep it and
// tally items outside the header in a pending map; rebuild() restores an
// exact tree for the current window.
//
// Not thread-safe for writers: insert() must be serialized per tree.
// Const members may run concurrently with each other.
class FpTree {
 public:
  FpTree() = default;
  explicit FpTree(MinSupport min_sup) : min_sup_(min_sup) {}

  // Two scans: the first derives L, the second inserts one branch per
  // transaction.
  static FpTree build(std::span<const ItemSet> transactions, MinSupport min_sup);
  // Same second scan with L pinned by the caller instead of derived.
  static FpTree build_with_order(std::span<const ItemSet> transactions, MinSupport min_sup,
                                 std::span<const Item> order);
  // Reassembles a tree from its persisted parts. Throws FormatError when the
  // pieces disagree (unknown items, bad depths, header counts that do not
  // match the nodes).
  static FpTree from_parts(MinSupport min_sup, std::uint64_t total_transactions,
                           std::span<const ItemCount> order,
                           std::map<Item, std::uint64_t> pending,
                           std::span<const PreorderEntry> nodes);

  // Adds one transaction under the frozen order. Items outside the header go
  // to the pending tally; total_transactions always grows by one.
  void insert(const ItemSet& transaction);

  const MinSupport& min_support() const { return min_sup_; }
  std::uint64_t total_transactions() const { return total_; }
  bool empty() const { return total_ == 0; }

  const std::vector<HeaderEntry>& header() const { return header_; }
  std::optional<std::size_t> header_index(const Item& item) const;
  const std::map<Item, std::uint64_t>& pending() const { return pending_; }
  // True when some pending item would now pass min_sup on its own tally.
  bool has_promotable_pending() const;

  const Item& item(NodeId node) const { return header_[nodes_.at(node).rank].item; }
  std::size_t rank(NodeId node) const { return nodes_.at(node).rank; }
  std::uint64_t count(NodeId node) const { return nodes_.at(node).count; }
  NodeId parent(NodeId node) const { return nodes_.at(node).parent; }
  NodeId next_same_item(NodeId node) const { return nodes_.at(node).next_same_item; }
  std::span<const NodeId> children(NodeId node) const { return nodes_.at(node).children; }

  // Node-link chain of `item`, head first; empty if the item is not frequent.
  std::vector<NodeId> chain(const Item& item) const;
  // Items strictly between `node` and the root.
  ItemSet prefix_path(NodeId node) const;
  // One rule {item} -> prefix_path(N) per chain node N below depth 1.
  std::vector<Rule> extract_rules(const Item& item) const;

  TreeStats stats() const;
  // Every node's root path with its count, in preorder with children
  // visited in L order.
  std::vector<PathCount> path_counts() const;
  std::vector<PreorderEntry> preorder() const;

  // Throws ContractError on the first broken structural invariant.
  void check_invariants() const;

  // Structural equality: min_sup, transaction total, header items and
  // counts in order, and the node tree with children compared by item.
  // Node-link chain order and the pending tally are not compared.
  friend bool operator==(const FpTree& a, const FpTree& b);

 private:
  struct Node {
    std::uint32_t rank = 0;
    std::uint64_t count = 0;
    NodeId parent = kNoNode;
    NodeId next_same_item = kNoNode;
    std::vector<NodeId> children;
  };

  void reset_order(std::span<const Item> order);
  void insert_ranked(std::span<const std::uint32_t> ranks);
  NodeId add_child(NodeId parent, std::uint32_t rank, std::uint64_t count);

  MinSupport min_sup_;
  std::uint64_t total_ = 0;
  std::vector<HeaderEntry> header_;
  std::map<Item, std::uint32_t> rank_of_;
  std::map<Item, std::uint64_t> pending_;
  std::vector<Node> nodes_{Node{}};
};

// build() over the current window with the tree's min_sup; recomputes L and
// clears the pending tally.
FpTree rebuild(const FpTree& tree, std::span<const ItemSet> window_transactions);

}  // namespace fpguard
