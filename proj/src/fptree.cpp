#include "fpguard/fptree.hpp"

#include <algorithm>
#include <numeric>

#include "fpguard/error.hpp"
#include "fpguard/text.hpp"

namespace fpguard {

namespace {

constexpr std::uint64_t kMaxDenominator = 1'000'000'000'000'000'000ULL;

// Exact decimal -> fraction. Accepts "12", "0.125", "1e-05", "2.5E-3".
std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_decimal(std::string_view s) {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  bool any_digit = false;
  bool in_fraction = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.' && !in_fraction) {
      in_fraction = true;
      continue;
    }
    if (c < '0' || c > '9') break;
    any_digit = true;
    if (numerator > kMaxDenominator) return std::nullopt;
    numerator = numerator * 10 + static_cast<std::uint64_t>(c - '0');
    if (in_fraction) {
      if (denominator >= kMaxDenominator) return std::nullopt;
      denominator *= 10;
    }
  }
  if (!any_digit) return std::nullopt;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return std::nullopt;
    auto exponent = text::parse_integer(s.substr(i + 1 + (i + 1 < s.size() && s[i + 1] == '+')));
    if (!exponent || *exponent < -18 || *exponent > 18) return std::nullopt;
    for (std::int64_t k = 0; k < std::abs(*exponent); ++k) {
      if (*exponent > 0) {
        if (numerator > kMaxDenominator) return std::nullopt;
        numerator *= 10;
      } else {
        if (denominator >= kMaxDenominator) return std::nullopt;
        denominator *= 10;
      }
    }
  }
  return std::pair{numerator, denominator};
}

}  // namespace

MinSupport MinSupport::from_ratio(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0 || numerator == 0 || numerator > denominator) {
    throw ConfigError("min_sup must lie in (0, 1], got " + std::to_string(numerator) + "/" +
                      std::to_string(denominator));
  }
  std::uint64_t g = std::gcd(numerator, denominator);
  return MinSupport(numerator / g, denominator / g);
}

MinSupport MinSupport::parse(std::string_view raw) {
  std::string_view s = text::trim(raw);
  auto fail = [&]() -> ConfigError {
    return ConfigError("min_sup '" + std::string(raw) + "' is not a fraction in (0, 1]");
  };
  if (std::size_t slash = s.find('/'); slash != std::string_view::npos) {
    auto n = text::parse_integer(s.substr(0, slash));
    auto d = text::parse_integer(s.substr(slash + 1));
    if (!n || !d || *n <= 0 || *d <= 0) throw fail();
    return from_ratio(static_cast<std::uint64_t>(*n), static_cast<std::uint64_t>(*d));
  }
  bool percent = !s.empty() && s.back() == '%';
  if (percent) s.remove_suffix(1);
  auto fraction = parse_decimal(s);
  if (!fraction) throw fail();
  auto [n, d] = *fraction;
  if (percent) {
    if (d > kMaxDenominator / 100) throw fail();
    d *= 100;
  }
  if (n == 0 || n > d) throw fail();
  return from_ratio(n, d);
}

MinSupport MinSupport::from_double(double value) {
  if (!(value > 0.0) || value > 1.0) {
    throw ConfigError("min_sup must lie in (0, 1], got " + text::format_number(value));
  }
  return parse(text::format_number(value));
}

bool MinSupport::is_frequent(std::uint64_t frequency, std::uint64_t total) const {
  // 128-bit to keep the cross-multiplication exact.
  return static_cast<unsigned __int128>(frequency) * denominator_ >=
         static_cast<unsigned __int128>(numerator_) * total;
}

std::uint64_t MinSupport::threshold(std::uint64_t total) const {
  auto product = static_cast<unsigned __int128>(numerator_) * total;
  return static_cast<std::uint64_t>((product + denominator_ - 1) / denominator_);
}

std::string MinSupport::to_string() const {
  return std::to_string(numerator_) + "/" + std::to_string(denominator_);
}

FrequentItems frequent_filter(std::span<const ItemSet> transactions, MinSupport min_sup) {
  FrequentItems result;
  if (transactions.empty()) return result;

  std::map<Item, std::uint64_t> frequency;
  for (const ItemSet& transaction : transactions) {
    for (const Item& item : transaction) ++frequency[item];
  }
  for (const auto& [item, count] : frequency) {
    if (min_sup.is_frequent(count, transactions.size())) result.order.push_back({item, count});
  }
  // std::map iteration already gives Item order; stable sort keeps it for ties.
  std::stable_sort(result.order.begin(), result.order.end(),
                   [](const ItemCount& a, const ItemCount& b) { return a.count > b.count; });

  std::map<Item, std::size_t> rank;
  for (std::size_t i = 0; i < result.order.size(); ++i) rank.emplace(result.order[i].item, i);

  result.filtered.reserve(transactions.size());
  for (const ItemSet& transaction : transactions) {
    std::vector<std::pair<std::size_t, const Item*>> kept;
    for (const Item& item : transaction) {
      if (auto it = rank.find(item); it != rank.end()) kept.emplace_back(it->second, &item);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<Item> ordered;
    ordered.reserve(kept.size());
    for (const auto& entry : kept) ordered.push_back(*entry.second);
    result.filtered.push_back(std::move(ordered));
  }
  return result;
}

void FpTree::reset_order(std::span<const Item> order) {
  header_.clear();
  rank_of_.clear();
  for (const Item& item : order) {
    auto [it, inserted] = rank_of_.emplace(item, static_cast<std::uint32_t>(header_.size()));
    if (!inserted) throw ContractError("item order lists " + item.to_string() + " twice");
    header_.push_back({item, 0, kNoNode});
  }
}

NodeId FpTree::add_child(NodeId parent, std::uint32_t rank, std::uint64_t count) {
  auto id = static_cast<NodeId>(nodes_.size());
  Node node;
  node.rank = rank;
  node.count = count;
  node.parent = parent;
  // New nodes go to the head of the chain, so the chain runs newest first.
  node.next_same_item = header_[rank].chain_head;
  header_[rank].chain_head = id;
  nodes_.push_back(std::move(node));
  nodes_[parent].children.push_back(id);
  return id;
}

void FpTree::insert_ranked(std::span<const std::uint32_t> ranks) {
  NodeId current = kRootNode;
  for (std::uint32_t rank : ranks) {
    NodeId next = kNoNode;
    for (NodeId child : nodes_[current].children) {
      if (nodes_[child].rank == rank) {
        next = child;
        break;
      }
    }
    if (next == kNoNode) {
      next = add_child(current, rank, 1);
    } else {
      ++nodes_[next].count;
    }
    ++header_[rank].total_count;
    current = next;
  }
}

FpTree FpTree::build(std::span<const ItemSet> transactions, MinSupport min_sup) {
  FrequentItems frequent = frequent_filter(transactions, min_sup);
  std::vector<Item> order;
  order.reserve(frequent.order.size());
  for (const ItemCount& entry : frequent.order) order.push_back(entry.item);

  FpTree tree(min_sup);
  tree.reset_order(order);
  std::vector<std::uint32_t> ranks;
  for (const auto& filtered : frequent.filtered) {
    ranks.clear();
    for (const Item& item : filtered) ranks.push_back(tree.rank_of_.at(item));
    tree.insert_ranked(ranks);
  }
  tree.total_ = transactions.size();
  return tree;
}

FpTree FpTree::build_with_order(std::span<const ItemSet> transactions, MinSupport min_sup,
                                std::span<const Item> order) {
  FpTree tree(min_sup);
  tree.reset_order(order);
  for (const ItemSet& transaction : transactions) tree.insert(transaction);
  return tree;
}

void FpTree::insert(const ItemSet& transaction) {
  std::vector<std::uint32_t> ranks;
  ranks.reserve(transaction.size());
  for (const Item& item : transaction) {
    if (auto it = rank_of_.find(item); it != rank_of_.end()) {
      ranks.push_back(it->second);
    } else {
      ++pending_[item];
    }
  }
  std::sort(ranks.begin(), ranks.end());
  insert_ranked(ranks);
  ++total_;
}

std::optional<std::size_t> FpTree::header_index(const Item& item) const {
  auto it = rank_of_.find(item);
  if (it == rank_of_.end()) return std::nullopt;
  return it->second;
}

bool FpTree::has_promotable_pending() const {
  return std::any_of(pending_.begin(), pending_.end(), [&](const auto& entry) {
    return min_sup_.is_frequent(entry.second, total_);
  });
}

std::vector<NodeId> FpTree::chain(const Item& item) const {
  std::vector<NodeId> out;
  auto index = header_index(item);
  if (!index) return out;
  for (NodeId node = header_[*index].chain_head; node != kNoNode;
       node = nodes_[node].next_same_item) {
    out.push_back(node);
  }
  return out;
}

ItemSet FpTree::prefix_path(NodeId node) const {
  ItemSet path;
  if (node == kRootNode) return path;
  for (NodeId up = nodes_.at(node).parent; up != kRootNode; up = nodes_[up].parent) {
    path.insert(header_[nodes_[up].rank].item);
  }
  return path;
}

std::vector<Rule> FpTree::extract_rules(const Item& item) const {
  std::vector<Rule> rules;
  auto index = header_index(item);
  if (!index) return rules;
  const std::uint64_t item_total = header_[*index].total_count;
  for (NodeId node : chain(item)) {
    ItemSet path = prefix_path(node);
    if (path.empty()) continue;
    const std::uint64_t count = nodes_[node].count;
    rules.push_back(Rule{{item}, std::move(path), Ratio{count, total_}, Ratio{count, item_total}});
  }
  return rules;
}

TreeStats FpTree::stats() const {
  TreeStats stats;
  stats.node_count = nodes_.size() - 1;
  stats.header_size = header_.size();
  std::vector<std::size_t> depth(nodes_.size(), 0);
  // Children are always appended after their parent, so one forward pass
  // sees every parent before its children.
  for (NodeId id = 1; id < nodes_.size(); ++id) {
    depth[id] = depth[nodes_[id].parent] + 1;
    stats.depth = std::max(stats.depth, depth[id]);
  }
  return stats;
}

std::vector<PreorderEntry> FpTree::preorder() const {
  std::vector<PreorderEntry> out;
  out.reserve(nodes_.size() - 1);
  struct Frame {
    NodeId node;
    std::size_t depth;
  };
  auto sorted_children = [&](NodeId id) {
    std::vector<NodeId> kids = nodes_[id].children;
    std::sort(kids.begin(), kids.end(),
              [&](NodeId a, NodeId b) { return nodes_[a].rank < nodes_[b].rank; });
    return kids;
  };
  std::vector<Frame> stack;
  auto push_children = [&](NodeId id, std::size_t depth) {
    auto kids = sorted_children(id);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, depth + 1});
  };
  push_children(kRootNode, 0);
  while (!stack.empty()) {
    Frame frame = stack.back();
    stack.pop_back();
    const Node& node = nodes_[frame.node];
    out.push_back({frame.depth, header_[node.rank].item, node.count});
    push_children(frame.node, frame.depth);
  }
  return out;
}

std::vector<PathCount> FpTree::path_counts() const {
  std::vector<PathCount> out;
  std::vector<Item> path;
  for (const PreorderEntry& entry : preorder()) {
    path.resize(entry.depth - 1, entry.item);
    path.push_back(entry.item);
    out.push_back({path, entry.count});
  }
  return out;
}

FpTree FpTree::from_parts(MinSupport min_sup, std::uint64_t total_transactions,
                          std::span<const ItemCount> order,
                          std::map<Item, std::uint64_t> pending,
                          std::span<const PreorderEntry> nodes) {
  FpTree tree(min_sup);
  std::vector<Item> items;
  for (const ItemCount& entry : order) items.push_back(entry.item);
  try {
    tree.reset_order(items);
  } catch (const ContractError& e) {
    throw FormatError(std::string("profile header: ") + e.what());
  }
  tree.total_ = total_transactions;
  tree.pending_ = std::move(pending);

  std::vector<NodeId> ancestors{kRootNode};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const PreorderEntry& entry = nodes[i];
    if (entry.depth == 0 || entry.depth > ancestors.size()) {
      throw FormatError("profile node " + std::to_string(i) + ": depth " +
                        std::to_string(entry.depth) + " does not follow its predecessor");
    }
    auto rank = tree.header_index(entry.item);
    if (!rank) {
      throw FormatError("profile node " + std::to_string(i) + ": item " +
                        entry.item.to_string() + " is not in the header");
    }
    if (entry.count == 0) {
      throw FormatError("profile node " + std::to_string(i) + ": zero count");
    }
    ancestors.resize(entry.depth);
    NodeId id = tree.add_child(ancestors.back(), static_cast<std::uint32_t>(*rank), entry.count);
    tree.header_[*rank].total_count += entry.count;
    ancestors.push_back(id);
  }
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (tree.header_[r].total_count != order[r].count) {
      throw FormatError("profile header count for " + order[r].item.to_string() + " is " +
                        std::to_string(order[r].count) + " but its nodes sum to " +
                        std::to_string(tree.header_[r].total_count));
    }
  }
  try {
    tree.check_invariants();
  } catch (const ContractError& e) {
    throw FormatError(std::string("profile tree: ") + e.what());
  }
  return tree;
}

void FpTree::check_invariants() const {
  auto fail = [](const std::string& message) { throw ContractError(message); };
  std::uint64_t top_level = 0;
  for (NodeId child : nodes_[kRootNode].children) top_level += nodes_[child].count;
  if (top_level > total_) fail("root children count more transactions than the total");

  std::vector<std::uint64_t> chain_sum(header_.size(), 0);
  std::vector<std::size_t> nodes_per_item(header_.size(), 0);
  for (NodeId id = 1; id < nodes_.size(); ++id) {
    const Node& node = nodes_[id];
    if (node.rank >= header_.size()) fail("node item is not in the header");
    if (node.count == 0) fail("node with zero count");
    const std::uint64_t parent_count =
        node.parent == kRootNode ? total_ : nodes_[node.parent].count;
    if (node.count > parent_count) fail("node count exceeds its parent's count");
    if (node.parent != kRootNode && nodes_[node.parent].rank >= node.rank) {
      fail("path is not in L order at " + header_[node.rank].item.to_string());
    }
    ++nodes_per_item[node.rank];
  }
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    std::vector<std::uint32_t> ranks;
    for (NodeId child : nodes_[id].children) ranks.push_back(nodes_[child].rank);
    std::sort(ranks.begin(), ranks.end());
    if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) {
      fail("siblings share an item");
    }
  }
  for (std::size_t r = 0; r < header_.size(); ++r) {
    std::size_t length = 0;
    for (NodeId node = header_[r].chain_head; node != kNoNode;
         node = nodes_[node].next_same_item) {
      if (nodes_[node].rank != r) fail("node-link chain crosses items");
      chain_sum[r] += nodes_[node].count;
      if (++length > nodes_per_item[r]) fail("node-link chain is cyclic");
    }
    if (length != nodes_per_item[r]) fail("node-link chain misses nodes");
    if (chain_sum[r] != header_[r].total_count) {
      fail("header count of " + header_[r].item.to_string() + " differs from its chain sum");
    }
  }
}

bool operator==(const FpTree& a, const FpTree& b) {
  if (!(a.min_sup_ == b.min_sup_) || a.total_ != b.total_ ||
      a.header_.size() != b.header_.size()) {
    return false;
  }
  for (std::size_t r = 0; r < a.header_.size(); ++r) {
    if (a.header_[r].item != b.header_[r].item ||
        a.header_[r].total_count != b.header_[r].total_count) {
      return false;
    }
  }
  return a.preorder() == b.preorder();
}

FpTree rebuild(const FpTree& tree, std::span<const ItemSet> window_transactions) {
  return FpTree::build(window_transactions, tree.min_support());
}

}  // namespace fpguard
