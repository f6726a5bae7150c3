#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fpguard/accumulator.hpp"
#include "fpguard/core.hpp"
#include "fpguard/evaluator.hpp"
#include "fpguard/fptree.hpp"
#include "fpguard/io.hpp"
#include "fpguard/matcher.hpp"

namespace fpguard {

// Every tunable of the pipeline. Loaded from a JSON document:
//
//   {
//     "format": "fpguard-config", "version": "1.0",
//     "min_sup": "5%",
//     "window": {"kind": "count", "size": 5000},
//     "rebuild_fraction": 0.25,
//     "adaptive_scoring": false,
//     "epsilon": 0.01,
//     "weights": {"default": 1.0, "attributes": {"ip": 1.5}},
//     "granularity": {"default": {"kind": "passthrough"},
//                     "attributes": {"time": {"kind": "time-of-day", "resolution": "coarse"}},
//                     "amount": {"kind": "intervals", "edges": [0, 10, 50]}},
//     "accumulation": {"expiring": "step", "degree": 2, "span_seconds": 86400,
//                      "anchoring": "sliding",
//                      "thresholds": [{"value": 200, "severity": "warn"}]},
//     "evaluation": {"alert_threshold": 0.5, "challenge_cost": 2.0,
//                    "miss_cost": "full-amount"},
//     "parse_mode": "strict"
//   }
//
// Every key is optional and falls back to EngineConfig::defaults().
struct EngineConfig {
  MinSupport min_sup;
  WindowSpec window = CountWindow{5000};
  double rebuild_fraction = 0.25;
  bool adaptive_scoring = false;
  CreditParams credit;
  WeightTable weights;
  GranularityConfig granularity;
  // When set, each transaction's amount also becomes an "amount" item.
  std::optional<BucketSpec> amount_bucket;
  AccumulatorConfig accumulation;
  double alert_threshold = 0.5;  // per-transaction suspicion
  CostParams cost;
  io::ParseMode parse_mode = io::ParseMode::kStrict;

  static EngineConfig defaults();
};

// ConfigError with the offending field path ("config.window.size: ...").
EngineConfig parse_config(const nlohmann::json& document);
EngineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const EngineConfig& config);

// Discretizes a raw transaction's items and adds the amount item when
// configured.
Transaction prepare(const Transaction& raw, const EngineConfig& config);

nlohmann::json to_json(const BehaviorProfile& profile);
BehaviorProfile parse_behavior_profile(const nlohmann::json& document);

}  // namespace fpguard
