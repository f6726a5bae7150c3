#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fpguard/config.hpp"
#include "fpguard/error.hpp"
#include "fpguard/io.hpp"
#include "fpguard/pipeline.hpp"

namespace fpguard {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("fpguard_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  std::string command = std::string(FPGUARD_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return io::read_file(p); }

TEST(Cli, StagesChainThroughFiles) {
  fs::path d = scratch("stages");
  std::string dir = d.string();
  ASSERT_EQ(run("simulate --seed 7 --legal 3000 --fraud 20 --out " + dir + "/t.tsv --labels " +
                dir + "/t.labels"),
            0);
  std::istringstream labels(slurp(d / "t.labels"));
  EXPECT_EQ(io::parse_labels(labels).size(), 3020u);
  ASSERT_EQ(run("build-profile --transactions " + dir + "/t.tsv --out " + dir + "/p"), 0);
  ASSERT_EQ(run("score --transactions " + dir + "/t.tsv --profiles " + dir + "/p --out " + dir +
                "/s.tsv"),
            0);
  ASSERT_EQ(run("accumulate --scores " + dir + "/s.tsv --out " + dir + "/a.tsv --trace " + dir +
                "/tr.tsv"),
            0);
  ASSERT_EQ(run("evaluate --scores " + dir + "/s.tsv --labels " + dir + "/t.labels --trace " +
                dir + "/tr.tsv --out " + dir + "/r"),
            0);
  for (const char* f : {"roc.tsv", "cost.tsv", "summary.json", "roc.dat", "roc.gp",
                        "alert-roc.tsv"}) {
    EXPECT_TRUE(fs::exists(d / "r" / f)) << f;
  }
  auto summary = nlohmann::json::parse(slurp(d / "r" / "summary.json"));
  EXPECT_EQ(summary["records"], 3020);
  EXPECT_EQ(run("stats --profiles " + dir + "/p"), 0);
}

TEST(Cli, ExitCodesFollowErrorCategories) {
  fs::path d = scratch("codes");
  std::string dir = d.string();
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("simulate --bogus"), 2);
  EXPECT_EQ(run("stats --profiles " + dir + "/nothing"), 1);

  std::ofstream(d / "bad.json") << R"({"min_sup": "2"})";
  EXPECT_EQ(run("stats --config " + dir + "/bad.json --profiles " + dir), 3);

  std::ofstream(d / "bad.tsv") << "%fpguard transactions 1.0\nu1\tx\t1\ta=b\n";
  EXPECT_EQ(run("build-profile --transactions " + dir + "/bad.tsv --out " + dir + "/p"), 4);

  std::ofstream(d / "empty.tsv") << "%fpguard transactions 1.0\n";
  EXPECT_EQ(run("build-profile --transactions " + dir + "/empty.tsv --out " + dir + "/p"), 6);

  std::ofstream(d / "one.tsv") << "u1\t1\t1\ta=b\n";
  ASSERT_EQ(run("build-profile --transactions " + dir + "/one.tsv --out " + dir + "/p1"), 0);
  std::ofstream(d / "other.tsv") << "u2\t1\t1\ta=b\n";
  EXPECT_EQ(run("score --transactions " + dir + "/other.tsv --profiles " + dir + "/p1 --out " +
                dir + "/s.tsv"),
            6);

  std::ofstream(d / "s1.tsv") << io::header_line(io::kind::kScores) << "\n0\tu1\t1\t1\t0\t1\n";
  std::ofstream(d / "l1.labels") << io::header_line(io::kind::kLabels) << "\nlegal\n";
  EXPECT_EQ(run("evaluate --scores " + dir + "/s1.tsv --labels " + dir + "/l1.labels --out " +
                dir + "/r"),
            7);
}

TEST(Pipeline, LenientModeSkipsBadLines) {
  fs::path d = scratch("lenient");
  std::ofstream(d / "mixed.tsv") << "u1\t1\t1\ta=b\nnot a record\nu1\t2\t1\ta=b\n";
  EngineConfig config = EngineConfig::defaults();
  EXPECT_THROW(pipeline::build_profiles(d / "mixed.tsv", d / "p", config), FormatError);
  config.parse_mode = io::ParseMode::kLenient;
  auto report = pipeline::build_profiles(d / "mixed.tsv", d / "p", config);
  EXPECT_EQ(report.transactions, 2u);
}

TEST(Pipeline, ProfilesArePerEntity) {
  fs::path d = scratch("entities");
  std::ofstream(d / "t.tsv") << "u1\t1\t5\tk=x\nu2\t2\t5\tk=y\nu1\t3\t5\tk=x\n";
  auto report = pipeline::build_profiles(d / "t.tsv", d / "p", EngineConfig::defaults());
  EXPECT_EQ(report.entities, 2u);
  auto profiles = io::load_profiles(d / "p");
  EXPECT_EQ(profiles.at("u1").tree.total_transactions(), 2u);
  EXPECT_EQ(profiles.at("u1").updated_at, 3);
  EXPECT_TRUE(profiles.at("u2").tree.header_index(Item("k", "y")).has_value());
  EXPECT_FALSE(profiles.at("u2").tree.header_index(Item("k", "x")).has_value());
}

TEST(Pipeline, AdaptiveScoringNeedsHistory) {
  fs::path d = scratch("adaptive");
  std::ofstream(d / "h.tsv") << "u1\t1\t5\tk=x\nu1\t2\t5\tk=x\n";
  std::ofstream(d / "t.tsv") << "u1\t3\t5\tk=x\nu1\t4\t5\tk=z\n";
  EngineConfig config = EngineConfig::defaults();
  config.adaptive_scoring = true;
  EXPECT_THROW(pipeline::score(d / "t.tsv", d, d / "s.tsv", config), ConfigError);
  pipeline::score(d / "t.tsv", d, d / "s.tsv", config, d / "h.tsv");
  std::istringstream in(slurp(d / "s.tsv"));
  auto rows = io::read_scores(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GT(rows[0].similarity, 0.0);
}

TEST(Pipeline, RunAllIsReproducible) {
  fs::path a = scratch("run_a");
  fs::path b = scratch("run_b");
  pipeline::RunAllRequest request;
  request.seed = 5;
  request.train_legal = 600;
  request.test_legal = 600;
  request.out_dir = a;
  pipeline::run_all(request, EngineConfig::defaults());
  request.out_dir = b;
  pipeline::run_all(request, EngineConfig::defaults());
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    fs::path other = b / fs::relative(entry.path(), a);
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
    ++compared;
  }
  EXPECT_GE(compared, 14u);
}

}  // namespace
}  // namespace fpguard
