#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "transtab/cli.hpp"
#include "transtab/engine.hpp"
#include "transtab/scenario_gen.hpp"

namespace transtab {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticSpec spec;
    spec.sources = 5;
    spec.targets = 2;
    spec.pool_size = 2;
    spec.samples_per_class = 15;
    spec.seed = 4;
    generate_synthetic_scenario(spec, dir_.path(), 1);
  }
  std::string manifest() const { return (dir_ / "manifest.json").string(); }

  test::TempDir dir_;
};

TEST_F(CliTest, UsageErrorsExitWithOne) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"metrics", "--manifest", manifest()}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"metrics", "--manifest", manifest(), "--source", "d01", "--target", "d00",
                 "--metrics", "leep,spearman"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"stability", "--mode", "approximate", "--manifest", manifest()}).code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, MetricsPrintsOneRowPerRequestedMetric) {
  const CliRun r = run_cli({"metrics", "--manifest", manifest(), "--source", "d01", "--target", "d00",
                     "--metrics", "leep,gbc"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(count_lines(r.out), 3u) << r.out;
  EXPECT_EQ(r.out.rfind("source,target,metric,value\n", 0), 0u);
  EXPECT_NE(r.out.find("d01,d00,leep,"), std::string::npos);
  EXPECT_NE(r.out.find("d01,d00,gbc,"), std::string::npos);
}

TEST_F(CliTest, ManifestProblemsExitWithTwo) {
  std::ofstream(dir_ / "bad.json") << R"({"scenario":"x"})";
  EXPECT_EQ(run_cli({"scenario", "--manifest", (dir_ / "bad.json").string(), "--out",
                 (dir_ / "o").string()})
                .code,
            cli::kExitManifest);
  const CliRun r = run_cli({"metrics", "--manifest", manifest(), "--source", "d00", "--target", "d00"});
  EXPECT_EQ(r.code, cli::kExitManifest) << r.err;
}

TEST_F(CliTest, MissingFeatureFileExitsWithThree) {
  std::filesystem::remove(dir_ / "data" / "d02__d01.features.tmx");
  const CliRun r = run_cli({"scenario", "--manifest", manifest(), "--out", (dir_ / "o").string()});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("(d02, d01)"), std::string::npos) << r.err;
}

TEST_F(CliTest, ScenarioWritesExportsAndCounts) {
  const auto out = dir_ / "o";
  const CliRun r = run_cli({"scenario", "--manifest", manifest(), "--out", out.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  // 2 targets x C(4, 2) pools x 4 measures.
  EXPECT_NE(r.out.find(",48,48,"), std::string::npos) << r.out;
  EXPECT_TRUE(std::filesystem::exists(out / "experiments.csv"));
  EXPECT_TRUE(std::filesystem::exists(out / "summary.json"));
  EXPECT_TRUE(std::filesystem::exists(out / "cache.csv"));
  EXPECT_EQ(count_lines(slurp(out / "experiments.csv")), 1u + 48u * 5u);

  const CliRun s = run_cli({"stability", "--experiments", (out / "experiments.csv").string(), "--out",
                     (dir_ / "st").string(), "--mode", "exact"});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  EXPECT_NE(s.out.find("source_pool"), std::string::npos) << s.out;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "st" / "stability.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "st" / "win_rate.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "st" / "stability.json"));

  const CliRun w = run_cli({"winrate", "--experiments", (out / "experiments.csv").string()});
  ASSERT_EQ(w.code, cli::kExitOk) << w.err;
  EXPECT_NE(w.out.find("logme"), std::string::npos) << w.out;
}

TEST_F(CliTest, StabilityOnASingleExperimentIsUndefined) {
  const auto csv = dir_ / "one.csv";
  std::ofstream(csv) << "experiment_id,target,measure,pool,metric,quality\n"
                        "0000000000000001,d00,kendall,d01;d02,leep,0.5\n"
                        "0000000000000001,d00,kendall,d01;d02,gbc,0.25\n";
  const CliRun r = run_cli({"stability", "--experiments", csv.string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("undefined"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("undefined"), std::string::npos) << r.err;
}

TEST_F(CliTest, SynthAndTargetPoolRun) {
  std::ofstream(dir_ / "spec.json") << R"({"sources":3,"targets":1,"pool_size":2,"classes":6,)"
                                       R"("samples_per_class":5,"metrics":["leep","gbc"]})";
  const auto out = dir_ / "syn";
  const CliRun s = run_cli({"synth", "--spec", (dir_ / "spec.json").string(), "--out", out.string(),
                     "--seed", "3"});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  EXPECT_TRUE(std::filesystem::exists(out / "manifest.json"));

  const CliRun t = run_cli({"targetpool", "--manifest", (out / "manifest.json").string(), "--source",
                     "d01", "--target", "d00", "--pool-size", "10", "--metrics", "numc,gbc",
                     "--measures", "weighted_kendall", "--out", (dir_ / "tp").string()});
  ASSERT_EQ(t.code, cli::kExitOk) << t.err;
  EXPECT_NE(t.out.find("numc"), std::string::npos) << t.out;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "tp" / "pool.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "tp" / "quality.csv"));

  EXPECT_EQ(run_cli({"synth", "--spec", (dir_ / "missing.json").string(), "--out", out.string()}).code,
            cli::kExitData);
}

}  // namespace
}  // namespace transtab
