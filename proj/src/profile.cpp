#include "fpguard/profile.hpp"

#include <cmath>

#include "fpguard/error.hpp"

namespace fpguard {

void validate(const AdaptivePolicy& policy) {
  validate(policy.window);
  if (!(policy.rebuild_fraction > 0.0) || policy.rebuild_fraction > 1.0) {
    throw ConfigError("rebuild_fraction must lie in (0, 1]");
  }
}

AdaptiveProfile::AdaptiveProfile(AdaptivePolicy policy)
    : policy_(std::move(policy)), tree_(policy_.min_sup) {
  validate(policy_);
}

void AdaptiveProfile::evict(Timestamp now) {
  if (const auto* count = std::get_if<CountWindow>(&policy_.window)) {
    while (window_.size() > count->count) window_.pop_front();
  } else {
    const Timestamp oldest_excluded = now - std::get<TimeWindow>(policy_.window).seconds;
    while (!window_.empty() && window_.front().timestamp <= oldest_excluded) window_.pop_front();
  }
}

void AdaptiveProfile::rebuild(Timestamp now) {
  std::vector<ItemSet> items;
  items.reserve(window_.size());
  for (const Transaction& t : window_) items.push_back(t.items);
  tree_ = fpguard::rebuild(tree_, items);
  updated_at_ = now;
  inserts_since_rebuild_ = 0;
  ++rebuild_count_;
}

RebuildReason AdaptiveProfile::add(const Transaction& transaction) {
  if (!window_.empty() && transaction.timestamp < window_.back().timestamp) {
    throw ContractError("adaptive profile received an out-of-order transaction");
  }
  const Timestamp now = transaction.timestamp;
  window_.push_back(transaction);
  evict(now);

  if (rebuild_count_ == 0) {
    rebuild(now);
    return RebuildReason::kInitial;
  }

  tree_.insert(transaction.items);
  ++inserts_since_rebuild_;

  bool slid = false;
  if (const auto* count = std::get_if<CountWindow>(&policy_.window)) {
    slid = static_cast<double>(inserts_since_rebuild_) >=
           policy_.rebuild_fraction * static_cast<double>(count->count);
  } else {
    slid = static_cast<double>(now - updated_at_) >=
           policy_.rebuild_fraction * static_cast<double>(std::get<TimeWindow>(policy_.window).seconds);
  }
  if (slid) {
    rebuild(now);
    return RebuildReason::kWindowSlide;
  }
  if (tree_.has_promotable_pending()) {
    rebuild(now);
    return RebuildReason::kPendingPromotion;
  }
  return RebuildReason::kNone;
}

void AdaptiveProfile::rebuild_now() {
  rebuild(window_.empty() ? updated_at_ : window_.back().timestamp);
}

}  // namespace fpguard
