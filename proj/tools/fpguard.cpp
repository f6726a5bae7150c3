#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fpguard/config.hpp"
#include "fpguard/error.hpp"
#include "fpguard/pipeline.hpp"

namespace {

using fpguard::ErrorCategory;
namespace pipeline = fpguard::pipeline;

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig: return 3;
    case ErrorCategory::kFormat: return 4;
    case ErrorCategory::kContract: return 5;
    case ErrorCategory::kScoring:
    case ErrorCategory::kEmptyProfile: return 6;
    case ErrorCategory::kEvaluation: return 7;
    case ErrorCategory::kIo: return 1;
  }
  return 1;
}

struct Common {
  std::string config;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* command, Common& common) {
  command->add_option("--config", common.config, "engine configuration (JSON)");
  command->add_option("--seed", common.seed, "random seed");
}

fpguard::EngineConfig load(const Common& common) {
  return common.config.empty() ? fpguard::EngineConfig::defaults()
                               : fpguard::load_config(common.config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpguard: behavioral fraud and anomaly detection"};
  app.require_subcommand(1);

  Common common;

  pipeline::SimulateRequest sim;
  auto* simulate = app.add_subcommand("simulate", "generate a labeled synthetic dataset");
  add_common(simulate, common);
  simulate->add_option("--profile", sim.profile, "legal behavior profile (name or JSON file)");
  simulate->add_option("--fraud-profile", sim.fraud_profile, "fraud behavior profile");
  simulate->add_option("--legal", sim.legal, "number of legal transactions");
  simulate->add_option("--fraud", sim.fraud, "number of fraud transactions");
  simulate->add_option("--entity", sim.entity, "entity id");
  simulate->add_option("--start", sim.start, "first timestamp (unix seconds)");
  simulate->add_option("--out", sim.out_transactions, "transactions output")->required();
  simulate->add_option("--labels", sim.out_labels, "labels output")->required();

  std::string build_in, build_out;
  auto* build = app.add_subcommand("build-profile", "build one profile per entity");
  add_common(build, common);
  build->add_option("--transactions", build_in, "training transactions")->required();
  build->add_option("--out", build_out, "profile directory")->required();

  std::string score_in, score_profiles, score_out, score_history;
  auto* score = app.add_subcommand("score", "score transactions against profiles");
  add_common(score, common);
  score->add_option("--transactions", score_in, "transactions to score")->required();
  score->add_option("--profiles", score_profiles, "profile directory");
  score->add_option("--history", score_history, "history replayed in adaptive mode");
  score->add_option("--out", score_out, "scores output")->required();

  std::string acc_in, acc_out, acc_trace, acc_profiles;
  auto* accumulate = app.add_subcommand("accumulate", "accumulate suspicion into alerts");
  add_common(accumulate, common);
  accumulate->add_option("--scores", acc_in, "scores input")->required();
  accumulate->add_option("--out", acc_out, "alerts output")->required();
  accumulate->add_option("--trace", acc_trace, "alert value after every record");
  accumulate->add_option("--profiles", acc_profiles, "profile directory (since-last-update)");

  std::string eval_scores, eval_labels, eval_trace, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "ROC and cost report");
  add_common(evaluate, common);
  evaluate->add_option("--scores", eval_scores, "scores input")->required();
  evaluate->add_option("--labels", eval_labels, "labels input")->required();
  evaluate->add_option("--trace", eval_trace, "alert trace for an alert-level section");
  evaluate->add_option("--out", eval_out, "report directory")->required();

  std::string stats_dir;
  auto* stats = app.add_subcommand("stats", "profile tree statistics");
  add_common(stats, common);
  stats->add_option("--profiles", stats_dir, "profile directory")->required();

  pipeline::RunAllRequest all;
  auto* run_all = app.add_subcommand("run-all", "simulate, build, score, accumulate, evaluate");
  add_common(run_all, common);
  run_all->add_option("--profile", all.profile, "legal behavior profile");
  run_all->add_option("--fraud-profile", all.fraud_profile, "fraud behavior profile");
  run_all->add_option("--train-legal", all.train_legal, "legal training transactions");
  run_all->add_option("--train-fraud", all.train_fraud, "fraud training transactions");
  run_all->add_option("--test-legal", all.test_legal, "legal test transactions");
  run_all->add_option("--test-fraud", all.test_fraud, "fraud test transactions");
  run_all->add_option("--entity", all.entity, "entity id");
  run_all->add_option("--out", all.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    fpguard::EngineConfig config = load(common);
    auto optional_path = [](const std::string& s) -> std::optional<pipeline::path> {
      if (s.empty()) return std::nullopt;
      return pipeline::path(s);
    };
    if (*simulate) {
      sim.seed = common.seed;
      auto dataset = pipeline::simulate(sim);
      std::cout << "generated " << dataset.transactions.size() << " transactions\n";
    } else if (*build) {
      auto report = pipeline::build_profiles(build_in, build_out, config);
      std::cout << "built " << report.entities << " profile(s) from " << report.transactions
                << " transactions\n";
    } else if (*score) {
      if (!config.adaptive_scoring && score_profiles.empty()) {
        throw fpguard::ConfigError("score needs --profiles unless adaptive scoring is enabled");
      }
      pipeline::score(score_in, score_profiles, score_out, config, optional_path(score_history));
    } else if (*accumulate) {
      pipeline::accumulate(acc_in, acc_out, optional_path(acc_trace), config,
                           optional_path(acc_profiles));
    } else if (*evaluate) {
      auto summary = pipeline::evaluate(
          {eval_scores, eval_labels, optional_path(eval_trace), eval_out}, config);
      std::cout << summary.dump(2) << '\n';
    } else if (*stats) {
      pipeline::stats(stats_dir, std::cout);
    } else if (*run_all) {
      all.seed = common.seed;
      auto summary = pipeline::run_all(all, config);
      std::cout << summary.dump(2) << '\n';
    }
  } catch (const fpguard::Error& e) {
    std::cerr << "error[" << fpguard::category_name(e.category()) << "]: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
