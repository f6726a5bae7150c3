#include "fpguard/pipeline.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

#include "fpguard/accumulator.hpp"
#include "fpguard/error.hpp"
#include "fpguard/evaluator.hpp"
#include "fpguard/io.hpp"
#include "fpguard/matcher.hpp"
#include "fpguard/profile.hpp"
#include "fpguard/text.hpp"

namespace fpguard::pipeline {

using nlohmann::json;

namespace {

std::vector<Transaction> load_transactions(const path& file, const EngineConfig& config) {
  std::istringstream in(io::read_file(file));
  io::ParseReport report;
  auto transactions = io::parse_transactions(in, config.parse_mode, &report);
  if (report.skipped > 0) {
    std::clog << "warning: " << file.string() << ": skipped " << report.skipped
              << " malformed line(s)\n";
    for (const auto& problem : report.problems) std::clog << "  " << problem << '\n';
  }
  return transactions;
}

std::vector<Transaction> prepare_all(const std::vector<Transaction>& raw,
                                     const EngineConfig& config) {
  std::vector<Transaction> prepared;
  prepared.reserve(raw.size());
  for (const Transaction& t : raw) prepared.push_back(prepare(t, config));
  return prepared;
}

// Entity -> indices into `transactions`, each list in (timestamp, index)
// order.
std::map<std::string, std::vector<std::size_t>> by_entity(
    const std::vector<Transaction>& transactions) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < transactions.size(); ++i) {
    groups[transactions[i].entity_id].push_back(i);
  }
  for (auto& [entity, indices] : groups) {
    std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return transactions[a].timestamp < transactions[b].timestamp;
    });
  }
  return groups;
}

std::string write_to_string(auto&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

AdaptivePolicy policy_of(const EngineConfig& config) {
  return AdaptivePolicy{config.window, config.min_sup, config.rebuild_fraction};
}

json outcome_json(const OutcomeMatrix& m) {
  return {{"hit", m.hit}, {"false_alarm", m.false_alarm}, {"miss", m.miss}, {"normal", m.normal}};
}

std::string roc_table(const RocCurve& curve) {
  std::ostringstream out;
  out << io::header_line(io::kind::kRoc) << '\n' << "#threshold\tfpr\ttpr\n";
  for (const RocPoint& p : curve.points) {
    out << text::format_number(p.threshold) << '\t' << text::format_number(p.false_positive_rate)
        << '\t' << text::format_number(p.true_positive_rate) << '\n';
  }
  return out.str();
}

json evaluate_section(std::span<const double> scores, std::span<const Label> labels,
                      std::span<const double> amounts, double threshold,
                      const EngineConfig& config, RocCurve& curve) {
  curve = roc(scores, labels);
  Evaluation at = evaluate_at(scores, labels, amounts, threshold, config.cost);
  return {{"auc", curve.auc},
          {"alert_threshold", threshold},
          {"outcomes", outcome_json(at.matrix)},
          {"cost", at.cost}};
}

}  // namespace

BehaviorProfile resolve_profile(const std::string& name_or_path) {
  auto builtins = builtin_profiles();
  if (auto it = builtins.find(name_or_path); it != builtins.end()) return it->second;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(name_or_path, ec)) {
    throw ConfigError("unknown profile '" + name_or_path +
                      "' (not a builtin name or an existing file)");
  }
  json document;
  try {
    document = json::parse(io::read_file(name_or_path));
  } catch (const json::parse_error& e) {
    throw ConfigError(name_or_path + ": not valid JSON: " + e.what());
  }
  return parse_behavior_profile(document);
}

LabeledDataset simulate(const SimulateRequest& request) {
  BehaviorProfile legal = resolve_profile(request.profile);
  BehaviorProfile fraud = resolve_profile(request.fraud_profile);
  LabeledDataset dataset = generate(legal, request.legal, request.fraud, fraud, request.seed,
                                    GenerateOptions{request.entity, request.start});
  if (!request.out_transactions.empty()) {
    io::write_file(request.out_transactions, write_to_string([&](std::ostream& out) {
                     io::write_transactions(out, dataset.transactions);
                   }));
  }
  if (!request.out_labels.empty()) {
    io::write_file(request.out_labels, write_to_string([&](std::ostream& out) {
                     io::write_labels(out, dataset.labels);
                   }));
  }
  return dataset;
}

BuildReport build_profiles(const path& transactions_file, const path& out_dir,
                           const EngineConfig& config) {
  auto transactions = prepare_all(load_transactions(transactions_file, config), config);
  if (transactions.empty()) {
    throw EmptyProfileError("empty profile: " + transactions_file.string() +
                            " holds no transactions");
  }
  std::map<std::string, io::StoredProfile> profiles;
  for (const auto& [entity, indices] : by_entity(transactions)) {
    std::vector<Transaction> history;
    history.reserve(indices.size());
    for (std::size_t i : indices) history.push_back(transactions[i]);
    const Timestamp now = history.back().timestamp;
    std::vector<ItemSet> window;
    for (const Transaction& t : window_select(history, config.window, now)) {
      window.push_back(t.items);
    }
    profiles.emplace(entity, io::StoredProfile{entity, now, FpTree::build(window, config.min_sup)});
  }
  io::save_profiles(out_dir, profiles);
  return {profiles.size(), transactions.size()};
}

void score(const path& transactions_file, const path& profiles_dir, const path& out_scores,
           const EngineConfig& config, const std::optional<path>& history) {
  auto transactions = prepare_all(load_transactions(transactions_file, config), config);
  const WeightTable& weights = config.weights;
  std::vector<io::ScoreRow> rows(transactions.size());

  auto fill = [&](std::size_t i, const FpTree& tree) {
    const Transaction& t = transactions[i];
    double similarity = 0.0;
    try {
      similarity = sim_match(t.items, tree, weights, config.credit);
    } catch (const ScoringError& e) {
      throw ScoringError("entity '" + t.entity_id + "': " + e.what());
    }
    rows[i] = io::ScoreRow{i, t.entity_id, t.timestamp, t.amount, similarity, suspicion(similarity)};
  };

  if (config.adaptive_scoring) {
    if (!history) throw ConfigError("adaptive scoring needs the history transactions");
    auto past = prepare_all(load_transactions(*history, config), config);
    std::map<std::string, AdaptiveProfile> profiles;
    for (const auto& [entity, indices] : by_entity(past)) {
      auto [it, inserted] = profiles.emplace(entity, AdaptiveProfile(policy_of(config)));
      for (std::size_t i : indices) it->second.add(past[i]);
    }
    for (const auto& [entity, indices] : by_entity(transactions)) {
      auto it = profiles.find(entity);
      if (it == profiles.end()) throw ScoringError("no profile for entity '" + entity + "'");
      for (std::size_t i : indices) {
        fill(i, it->second.tree());
        it->second.add(transactions[i]);
      }
    }
  } else {
    auto profiles = io::load_profiles(profiles_dir);
    for (std::size_t i = 0; i < transactions.size(); ++i) {
      auto it = profiles.find(transactions[i].entity_id);
      if (it == profiles.end()) {
        throw ScoringError("no profile for entity '" + transactions[i].entity_id + "'");
      }
      fill(i, it->second.tree);
    }
  }
  io::write_file(out_scores,
                 write_to_string([&](std::ostream& out) { io::write_scores(out, rows); }));
}

void accumulate(const path& scores_file, const path& out_alerts,
                const std::optional<path>& out_trace, const EngineConfig& config,
                const std::optional<path>& profiles_dir) {
  std::istringstream in(io::read_file(scores_file));
  auto rows = io::read_scores(in, scores_file.string());
  if (config.accumulation.thresholds.empty()) throw ConfigError("no alert thresholds configured");

  std::map<std::string, Timestamp> updated_at;
  if (config.accumulation.anchoring == Anchoring::kSinceLastUpdate) {
    if (!profiles_dir) {
      throw ConfigError("since-last-update anchoring needs the profile directory");
    }
    for (const auto& [entity, profile] : io::load_profiles(*profiles_dir)) {
      updated_at[entity] = profile.updated_at;
    }
  }

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < rows.size(); ++i) groups[rows[i].entity_id].push_back(i);

  std::vector<io::AlertRow> alerts;
  std::vector<io::TraceRow> trace(rows.size());
  for (auto& [entity, indices] : groups) {
    std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return rows[a].timestamp < rows[b].timestamp;
    });
    Timestamp t0 = 0;
    if (config.accumulation.anchoring == Anchoring::kSinceLastUpdate) {
      auto it = updated_at.find(entity);
      if (it == updated_at.end()) throw ScoringError("no profile for entity '" + entity + "'");
      t0 = it->second;
    }
    AlertState state(config.accumulation, rows[indices.front()].timestamp, t0);
    for (std::size_t i : indices) {
      const io::ScoreRow& row = rows[i];
      SuspicionRecord record{Transaction{row.entity_id, row.timestamp, {}, row.amount},
                             row.similarity, row.suspicion, row.timestamp};
      state = state.slide(row.timestamp, std::span(&record, 1));
      Firing firing = fire(state);
      trace[i] = io::TraceRow{row.index, entity, row.timestamp, firing.alert_value, firing.severity};
      if (firing.severity) {
        alerts.push_back(
            {entity, row.timestamp, firing.alert_value, *firing.severity, firing.record_count});
      }
    }
  }
  io::write_file(out_alerts,
                 write_to_string([&](std::ostream& out) { io::write_alerts(out, alerts); }));
  if (out_trace) {
    io::write_file(*out_trace,
                   write_to_string([&](std::ostream& out) { io::write_trace(out, trace); }));
  }
}

json evaluate(const EvaluateRequest& request, const EngineConfig& config) {
  std::istringstream score_in(io::read_file(request.scores));
  auto rows = io::read_scores(score_in, request.scores.string());
  std::istringstream label_in(io::read_file(request.labels));
  auto labels = io::parse_labels(label_in);
  if (rows.size() != labels.size()) {
    throw EvaluationError("scores hold " + std::to_string(rows.size()) + " records but labels hold " +
                          std::to_string(labels.size()));
  }
  std::sort(rows.begin(), rows.end(),
            [](const io::ScoreRow& a, const io::ScoreRow& b) { return a.index < b.index; });
  std::vector<double> suspicion_scores;
  std::vector<double> amounts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].index != i) {
      throw EvaluationError("score indices must cover 0.." + std::to_string(rows.size() - 1) +
                            " exactly once");
    }
    suspicion_scores.push_back(rows[i].suspicion);
    amounts.push_back(rows[i].amount);
  }

  std::error_code ec;
  std::filesystem::create_directories(request.out_dir, ec);
  if (ec) throw IoError("cannot create " + request.out_dir.string() + ": " + ec.message());

  const auto fraud = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::kFraud));
  json summary;
  summary["format"] = "fpguard-summary";
  summary["version"] = std::to_string(io::kFormatMajor) + "." + std::to_string(io::kFormatMinor);
  summary["records"] = rows.size();
  summary["fraud"] = fraud;
  summary["legal"] = rows.size() - fraud;

  RocCurve curve;
  summary["transaction_level"] =
      evaluate_section(suspicion_scores, labels, amounts, config.alert_threshold, config, curve);
  io::write_file(request.out_dir / "roc.tsv", roc_table(curve));

  std::ostringstream dat;
  dat << "# fpr tpr\n";
  for (const RocPoint& p : curve.points) {
    dat << text::format_number(p.false_positive_rate) << ' '
        << text::format_number(p.true_positive_rate) << '\n';
  }
  io::write_file(request.out_dir / "roc.dat", dat.str());
  std::ostringstream gp;
  gp << "set terminal pngcairo size 640,640\n"
     << "set output 'roc.png'\n"
     << "set xlabel 'false positive rate'\n"
     << "set ylabel 'true positive rate'\n"
     << "set xrange [0:1]\nset yrange [0:1]\nset key bottom right\n"
     << "plot 'roc.dat' using 1:2 with lines title 'AUC " << text::format_number(curve.auc)
     << "', x with lines dashtype 2 title 'chance'\n";
  io::write_file(request.out_dir / "roc.gp", gp.str());

  std::ostringstream cost;
  cost << io::header_line(io::kind::kCostCurve) << '\n'
       << "#threshold\thit\tfalse_alarm\tmiss\tnormal\tcost\n";
  for (const CostPoint& p : cost_curve(suspicion_scores, labels, amounts, config.cost)) {
    const OutcomeMatrix& m = p.evaluation.matrix;
    cost << text::format_number(p.threshold) << '\t' << m.hit << '\t' << m.false_alarm << '\t'
         << m.miss << '\t' << m.normal << '\t' << text::format_number(p.evaluation.cost) << '\n';
  }
  io::write_file(request.out_dir / "cost.tsv", cost.str());

  if (request.trace) {
    std::istringstream trace_in(io::read_file(*request.trace));
    auto trace = io::read_trace(trace_in, request.trace->string());
    if (trace.size() != rows.size()) {
      throw EvaluationError("alert trace holds " + std::to_string(trace.size()) +
                            " records but scores hold " + std::to_string(rows.size()));
    }
    std::vector<double> alert_values(rows.size(), 0.0);
    std::vector<char> seen(rows.size(), 0);
    for (const io::TraceRow& row : trace) {
      if (row.index >= rows.size() || seen[row.index]) {
        throw EvaluationError("alert trace index " + std::to_string(row.index) + " is invalid");
      }
      seen[row.index] = 1;
      alert_values[row.index] = row.alert_value;
    }
    RocCurve alert_curve;
    json section = evaluate_section(alert_values, labels, amounts,
                                    config.accumulation.thresholds.front().alert_value, config,
                                    alert_curve);
    summary["alert_level"] = section;
    io::write_file(request.out_dir / "alert-roc.tsv", roc_table(alert_curve));
  }

  io::write_file(request.out_dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

void stats(const path& profiles_dir, std::ostream& out) {
  out << "#entity\tnodes\tdepth\theader\ttransactions\n";
  for (const auto& [entity, profile] : io::load_profiles(profiles_dir)) {
    TreeStats s = profile.tree.stats();
    out << text::escape(entity) << '\t' << s.node_count << '\t' << s.depth << '\t'
        << s.header_size << '\t' << profile.tree.total_transactions() << '\n';
  }
}

json run_all(const RunAllRequest& request, const EngineConfig& config) {
  const path& dir = request.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  SimulateRequest train{request.profile, request.fraud_profile, request.train_legal,
                        request.train_fraud, request.seed, request.entity, request.train_start,
                        dir / "train.tsv", dir / "train.labels"};
  simulate(train);
  SimulateRequest test{request.profile, request.fraud_profile, request.test_legal,
                       request.test_fraud, request.seed + 1, request.entity, request.test_start,
                       dir / "test.tsv", dir / "test.labels"};
  simulate(test);

  // Training labels are written for reference only; the profile never sees them.
  build_profiles(dir / "train.tsv", dir / "profiles", config);
  score(dir / "test.tsv", dir / "profiles", dir / "scores.tsv", config, dir / "train.tsv");
  accumulate(dir / "scores.tsv", dir / "alerts.tsv", dir / "trace.tsv", config, dir / "profiles");
  return evaluate(EvaluateRequest{dir / "scores.tsv", dir / "test.labels", dir / "trace.tsv",
                                  dir / "report"},
                  config);
}

}  // namespace fpguard::pipeline
