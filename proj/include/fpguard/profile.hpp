#pragma once

#include <deque>
#include <span>

#include "fpguard/core.hpp"
#include "fpguard/fptree.hpp"

namespace fpguard {

struct AdaptivePolicy {
  WindowSpec window = CountWindow{5000};
  MinSupport min_sup;
  // Rebuild once the window has slid this fraction of its span since the
  // last rebuild.
  double rebuild_fraction = 0.25;
};

void validate(const AdaptivePolicy& policy);

enum class RebuildReason { kNone, kInitial, kWindowSlide, kPendingPromotion, kExplicit };

// Keeps one entity's tree in step with a sliding window. Between rebuilds
// new transactions are inserted under the frozen L order; a rebuild is
// triggered by window slide, by a pending item crossing min_sup, or on
// demand.
//
// Single writer: add() and rebuild_now() must be serialized.
class AdaptiveProfile {
 public:
  explicit AdaptiveProfile(AdaptivePolicy policy);

  // Transactions must arrive in timestamp order.
  RebuildReason add(const Transaction& transaction);
  void rebuild_now();

  const FpTree& tree() const { return tree_; }
  const std::deque<Transaction>& window() const { return window_; }
  // Timestamp of the newest transaction at the last rebuild.
  Timestamp updated_at() const { return updated_at_; }
  std::size_t rebuild_count() const { return rebuild_count_; }

 private:
  void evict(Timestamp now);
  void rebuild(Timestamp now);

  AdaptivePolicy policy_;
  std::deque<Transaction> window_;
  FpTree tree_;
  Timestamp updated_at_ = 0;
  std::size_t inserts_since_rebuild_ = 0;
  std::size_t rebuild_count_ = 0;
};

}  // namespace fpguard
