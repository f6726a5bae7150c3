#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "fpguard/config.hpp"
#include "fpguard/simulator.hpp"

// Batch stages of the detection pipeline. Each stage reads the artifacts
// of the previous one and writes its own; `run_all` chains them with a
// fixed directory layout.
namespace fpguard::pipeline {

using std::filesystem::path;

// Builtin profile name, or a path to a behavior-profile JSON document.
BehaviorProfile resolve_profile(const std::string& name_or_path);

struct SimulateRequest {
  std::string profile = "regular";
  std::string fraud_profile = "fraud";
  std::size_t legal = 3000;
  std::size_t fraud = 20;
  std::uint64_t seed = 0;
  std::string entity = "u1";
  Timestamp start = GenerateOptions{}.start;
  path out_transactions;
  path out_labels;
};

LabeledDataset simulate(const SimulateRequest& request);

struct BuildReport {
  std::size_t entities = 0;
  std::size_t transactions = 0;
};

// Groups transactions by entity, selects each entity's window ending at its
// newest transaction and persists one tree per entity. EmptyProfileError on
// a dataset with no transactions.
BuildReport build_profiles(const path& transactions, const path& out_dir,
                           const EngineConfig& config);

// Scores every transaction against its entity's profile, preserving input
// order. With config.adaptive_scoring the profiles are replayed from
// `history` and then updated after each scored transaction.
void score(const path& transactions, const path& profiles_dir, const path& out_scores,
           const EngineConfig& config, const std::optional<path>& history = std::nullopt);

// Replays scores per entity through the accumulation window. Writes fired
// alerts and, optionally, the alert value after every record.
// `profiles_dir` supplies T0 for since-last-update anchoring.
void accumulate(const path& scores, const path& out_alerts, const std::optional<path>& out_trace,
                const EngineConfig& config, const std::optional<path>& profiles_dir = std::nullopt);

struct EvaluateRequest {
  path scores;
  path labels;
  std::optional<path> trace;  // adds an alert-level section
  path out_dir;
};

// Writes roc.tsv, cost.tsv, summary.json, roc.dat and roc.gp (plus
// alert-roc.tsv with a trace) and returns the summary.
nlohmann::json evaluate(const EvaluateRequest& request, const EngineConfig& config);

// One line per entity: entity, nodes, depth, header size, transactions.
void stats(const path& profiles_dir, std::ostream& out);

struct RunAllRequest {
  std::string profile = "regular";
  std::string fraud_profile = "fraud";
  std::size_t train_legal = 3000;
  std::size_t train_fraud = 50;
  std::size_t test_legal = 3000;
  std::size_t test_fraud = 20;
  std::uint64_t seed = 0;
  std::string entity = "u1";
  Timestamp train_start = GenerateOptions{}.start;
  Timestamp test_start = GenerateOptions{}.start + 52 * 7 * 24 * 3600;
  path out_dir;
};

// simulate (train, seed) -> simulate (test, seed + 1) -> build-profile on
// the unlabeled training transactions -> score -> accumulate -> evaluate.
// Layout under out_dir: train.tsv, train.labels, test.tsv, test.labels,
// profiles/, scores.tsv, alerts.tsv, trace.tsv, report/.
nlohmann::json run_all(const RunAllRequest& request, const EngineConfig& config);

}  // namespace fpguard::pipeline
