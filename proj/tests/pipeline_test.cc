// Copyright 2026 The Stylo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "stylo/clustering.h"
#include "stylo/error.h"
#include "stylo/pipeline.h"
#include "test_support.h"

namespace stylo {
namespace {

PipelineConfig small_config() {
  PipelineConfig c;
  c.synth_students = 24;
  c.similarity_model = "ngram";
  c.heatmap_pairs = 500;
  c.restarts = 3;
  c.k_max = 5;
  return c;
}

TEST(PipelineConfig, ParsesIniSections) {
  std::istringstream in(
      "[run]\nseed = 42\n[synth]\nstudents = 10\narchetypes = stable:2,slow_decline\n"
      "[similarity]\nmodel = ngram\n[clustering]\nk = 0\n");
  const auto c = PipelineConfig::parse(in);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.synth_students, 10u);
  EXPECT_EQ(c.similarity_model, "ngram");
  EXPECT_EQ(c.k, 0u);
  const auto mix = c.archetype_mix();
  EXPECT_EQ(mix.at(synth::Archetype::kStable), 2.0);
  EXPECT_EQ(mix.at(synth::Archetype::kSlowDecline), 1.0);
}

TEST(PipelineConfig, UnknownKeysAndBadValuesAreUsageErrors) {
  std::istringstream unknown("[synth]\nstudentz = 10\n");
  EXPECT_THROW(PipelineConfig::parse(unknown), UsageError);
  std::istringstream bare("seed = 3\n");
  EXPECT_THROW(PipelineConfig::parse(bare), UsageError);
  PipelineConfig c;
  EXPECT_THROW(c.set("synth.students", "many"), UsageError);
  EXPECT_THROW(c.set("nosuch.key", "1"), UsageError);
}

TEST(PipelineConfig, ValidationNamesTheField) {
  PipelineConfig c;
  c.split_train = 0.9;
  try {
    c.validate();
    FAIL() << "expected a UsageError";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("split"), std::string::npos);
  }
  c = PipelineConfig{};
  c.similarity_model = "bert";
  EXPECT_THROW(c.validate(), UsageError);
  c = PipelineConfig{};
  c.max_epochs = 0;
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(PipelineConfig, IniRoundTripsEveryField) {
  PipelineConfig c;
  c.seed = 77;
  c.step = 0.1;
  c.preset = "paper";
  c.pseudonymize = false;
  std::istringstream in(c.to_ini());
  const auto back = PipelineConfig::parse(in);
  for (const auto& key : PipelineConfig::keys()) EXPECT_EQ(back.get(key), c.get(key)) << key;
}

TEST(PipelineConfig, StageSeedsDifferAndFollowTheMasterSeed) {
  PipelineConfig a, b;
  b.seed = 2;
  EXPECT_NE(a.stage_seed("split"), a.stage_seed("train"));
  EXPECT_NE(a.stage_seed("split"), b.stage_seed("split"));
  EXPECT_EQ(a.split_spec().seed, a.stage_seed("split"));
  EXPECT_EQ(a.train_config().seed, a.stage_seed("train"));
}

TEST(PipelineConfig, StageSeedOverride) {
  PipelineConfig c;
  c.set("seeds.split", "123");
  EXPECT_EQ(c.stage_seed("split"), 123u);
  EXPECT_EQ(c.stage_seed("train"), PipelineConfig{}.stage_seed("train"));
  std::istringstream in(c.to_ini());
  EXPECT_EQ(PipelineConfig::parse(in).stage_seed("split"), 123u);
  c.set("seeds.split", "");
  EXPECT_EQ(c.stage_seed("split"), PipelineConfig{}.stage_seed("split"));
  EXPECT_THROW(c.set("seeds.split", "-4"), UsageError);
}

TEST(Pipeline, ChangingOneStageSeedKeepsEarlierOutputs) {
  testing::TempDir a, b;
  std::ostringstream log;
  auto other = small_config();
  other.set("seeds.split", "99");
  for (const char* s : {"synth", "clean", "split"}) {
    Pipeline(small_config(), a.path(), log).run(s);
    Pipeline(other, b.path(), log).run(s);
  }
  for (auto f : {artifacts::kRaw, artifacts::kClean, artifacts::kCleaning}) {
    const std::string name(f);
    EXPECT_EQ(testing::read_file(a.path() / name), testing::read_file(b.path() / name)) << name;
  }
  const std::string split(artifacts::kSplit);
  EXPECT_NE(testing::read_file(a.path() / split), testing::read_file(b.path() / split));
}

TEST(KRange, Forms) {
  EXPECT_EQ(parse_k_range("2..5"), (std::vector<size_t>{2, 3, 4, 5}));
  EXPECT_EQ(parse_k_range("3,5,7"), (std::vector<size_t>{3, 5, 7}));
  EXPECT_THROW(parse_k_range("5..2"), UsageError);
  EXPECT_THROW(parse_k_range("x"), UsageError);
}

TEST(Pipeline, MissingArtifactNamesTheStage) {
  testing::TempDir dir;
  std::ostringstream log;
  Pipeline p(small_config(), dir.path(), log);
  try {
    p.run("cluster");
    FAIL() << "expected a DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'profile'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(p.run("nosuch"), UsageError);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "config.ini"));
}

TEST(Pipeline, AllStagesWithTheNgramModel) {
  testing::TempDir dir;
  std::ostringstream log;
  Pipeline p(small_config(), dir.path(), log);
  p.run("all");
  for (auto a : {artifacts::kRaw, artifacts::kLabels, artifacts::kClean, artifacts::kCleaning,
                 artifacts::kSplit, artifacts::kPairsTrain, artifacts::kPairsVal,
                 artifacts::kPairsAnalyze, artifacts::kEval, artifacts::kProfiles,
                 artifacts::kApprox, artifacts::kAssignments, artifacts::kCentroids,
                 artifacts::kClusterHistory, artifacts::kElbow, artifacts::kTextIndicators,
                 artifacts::kQualityCurves, artifacts::kPairSamples, artifacts::kHeatmap,
                 artifacts::kHeatmapSvg, artifacts::kRandomPairs, artifacts::kCorpusStats,
                 artifacts::kCorpusStatsSvg, artifacts::kConfig}) {
    EXPECT_TRUE(std::filesystem::exists(p.path(a))) << a;
  }
  EXPECT_FALSE(std::filesystem::exists(p.path(artifacts::kModel)));
  EXPECT_TRUE(std::filesystem::exists(p.path(artifacts::kReportDir) / "0" / "plot.svg"));

  std::ifstream elbow(p.path(artifacts::kElbow));
  EXPECT_EQ(read_elbow(elbow).size(), 4u);
  std::ifstream centroids(p.path(artifacts::kCentroids));
  EXPECT_EQ(read_centroids(centroids).size(), 3u);

  // The echoed config reproduces the run configuration.
  const auto echoed = PipelineConfig::load(p.path(artifacts::kConfig));
  EXPECT_EQ(echoed.to_ini(), small_config().to_ini());
}

TEST(Pipeline, ElbowRangeOverride) {
  testing::TempDir dir;
  std::ostringstream log;
  auto cfg = small_config();
  for (const char* s : {"synth", "clean", "split", "pairs", "profile"}) {
    Pipeline(cfg, dir.path(), log).run(s);
  }
  Pipeline p(cfg, dir.path(), log);
  p.set_elbow_ks(parse_k_range("2..4"));
  p.run("elbow");
  std::ifstream elbow(p.path(artifacts::kElbow));
  const auto pts = read_elbow(elbow);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts.front().k, 2u);
}

TEST(Pipeline, IdenticalRunsGiveIdenticalCsvs) {
  testing::TempDir a, b;
  std::ostringstream log;
  Pipeline(small_config(), a.path(), log).run("all");
  Pipeline(small_config(), b.path(), log).run("all");
  size_t compared = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    EXPECT_EQ(testing::read_file(e.path()), testing::read_file(b.path() / rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 20u);
}

TEST(Pipeline, IngestsAJsonlFile) {
  testing::TempDir dir;
  const auto input = dir.path() / "in.jsonl";
  {
    std::ofstream out(input);
    std::ostringstream log;
    Pipeline(small_config(), dir.path() / "gen", log).run("synth");
    out << testing::read_file(dir.path() / "gen" / "raw.jsonl");
  }
  auto cfg = small_config();
  cfg.input = input.string();
  std::ostringstream log;
  Pipeline p(cfg, dir.path() / "run", log);
  p.run("ingest");
  EXPECT_EQ(testing::read_file(p.path(artifacts::kRaw)),
            testing::read_file(dir.path() / "gen" / "raw.jsonl"));
}

#ifdef STYLO_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(STYLO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir;
  const std::string out = " -o " + dir.path().string();
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  EXPECT_EQ(run_cli(out + " --set split.train=0.9 split"), 1);
  EXPECT_EQ(run_cli(out + " --set bogus cluster"), 1);
  EXPECT_EQ(run_cli(out + " cluster"), 2);
  EXPECT_EQ(run_cli(out + " ingest --input " + (dir.path() / "absent.jsonl").string()), 2);
  EXPECT_EQ(run_cli(out + " --set synth.students=12 synth"), 0);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "raw.jsonl"));
}
#endif

}  // namespace
}  // namespace stylo
