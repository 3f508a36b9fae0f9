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

// End-to-end orchestration: configuration, stage artifacts and the stage
// runner behind the command-line tool.

#ifndef STYLO_PIPELINE_H_
#define STYLO_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stylo/corpus.h"
#include "stylo/siamese.h"
#include "stylo/similarity.h"
#include "stylo/synth.h"
#include "stylo/trainer.h"

namespace stylo {

struct PipelineConfig {
  uint64_t seed = 1;
  std::string input;

  size_t synth_students = 60;
  std::string synth_archetypes = "stable,sudden_drop,steady_decline";
  double synth_months = 30.0;
  size_t synth_min_texts = 6;
  size_t synth_max_texts = 20;
  size_t synth_min_chars = 800;
  size_t synth_max_chars = 1400;
  double synth_language_spread = 4.0;
  double synth_author_spread = 2.0;
  double synth_drift_spread = 6.0;
  double synth_length_growth = 0.0;

  size_t strip_prefix = 200;
  size_t min_length = 400;
  size_t max_length = 30000;
  bool pseudonymize = true;
  size_t min_texts = 5;

  double split_train = 0.54;
  double split_val = 0.10;
  double split_analyze = 0.36;

  std::string similarity_model = "siamese";
  size_t ngram = 4;
  std::string preset = "desk";

  size_t batch_size = 32;
  size_t max_epochs = 20;
  size_t patience = 3;
  size_t max_pairs_per_epoch = 0;
  double learning_rate = 1e-3;
  size_t vocab_min_count = 10;

  size_t m = 2;
  double step = 0.05;
  double horizon = 30.0;

  // 0 picks the elbow-selected k.
  size_t k = 3;
  size_t k_min = 2;
  size_t k_max = 9;
  size_t restarts = 10;
  size_t max_iter = 100;
  double tol = 1e-6;

  size_t heatmap_pairs = 20000;

  // Per-stage seed overrides ("seeds.<stage>"). A stage without an entry
  // derives its seed from `seed` and the stage name.
  std::map<std::string, uint64_t, std::less<>> stage_seeds;

  // Keys are "section.name".
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static std::vector<std::string> keys();

  // Throws UsageError naming the offending field.
  void validate() const;

  // INI text: "[section]" headers followed by "name = value" lines.
  static PipelineConfig parse(std::istream& in);
  static PipelineConfig load(const std::filesystem::path& path);
  std::string to_ini() const;

  uint64_t stage_seed(std::string_view stage) const;
  std::map<synth::Archetype, double> archetype_mix() const;
  synth::SynthOptions synth_options() const;
  CleaningConfig cleaning() const;
  SplitSpec split_spec() const;
  TrainConfig train_config() const;
  Architecture architecture() const;
};

// Stages that draw random numbers.
inline constexpr std::string_view kSeededStages[] = {
    "synth", "split", "pairs", "train", "elbow", "cluster", "heatmap"};

inline constexpr std::string_view kStages[] = {
    "synth", "ingest", "clean",   "split",   "pairs",   "train",  "eval",
    "profile", "cluster", "elbow", "quality", "heatmap", "report", "all"};

// Artifact file names relative to the output directory.
namespace artifacts {
inline constexpr std::string_view kRaw = "raw.jsonl";
inline constexpr std::string_view kLabels = "planted_labels.csv";
inline constexpr std::string_view kClean = "clean.jsonl";
inline constexpr std::string_view kCleaning = "cleaning.csv";
inline constexpr std::string_view kSplit = "split.csv";
inline constexpr std::string_view kPairsTrain = "pairs_train.csv";
inline constexpr std::string_view kPairsVal = "pairs_val.csv";
inline constexpr std::string_view kPairsAnalyze = "pairs_analyze.csv";
inline constexpr std::string_view kModel = "model.bin";
inline constexpr std::string_view kTrainingLog = "training_log.csv";
inline constexpr std::string_view kEval = "eval.csv";
inline constexpr std::string_view kProfiles = "profiles.csv";
inline constexpr std::string_view kApprox = "approx_profiles.csv";
inline constexpr std::string_view kAssignments = "assignments.csv";
inline constexpr std::string_view kCentroids = "centroids.csv";
inline constexpr std::string_view kClusterHistory = "cluster_history.csv";
inline constexpr std::string_view kElbow = "elbow.csv";
inline constexpr std::string_view kTextIndicators = "text_indicators.csv";
inline constexpr std::string_view kQualityCurves = "quality_curves.csv";
inline constexpr std::string_view kPairSamples = "pair_samples.csv";
inline constexpr std::string_view kHeatmap = "heatmap.csv";
inline constexpr std::string_view kHeatmapSvg = "heatmap.svg";
inline constexpr std::string_view kRandomPairs = "random_pairs.csv";
inline constexpr std::string_view kReportDir = "cluster_report";
inline constexpr std::string_view kCorpusStats = "corpus_stats.csv";
inline constexpr std::string_view kCorpusStatsSvg = "corpus_stats.svg";
inline constexpr std::string_view kConfig = "config.ini";
}  // namespace artifacts

class Pipeline {
 public:
  // Progress messages go to `log`.
  Pipeline(PipelineConfig config, std::filesystem::path out, std::ostream& log);

  // Runs one stage by name; "all" chains every stage, starting from `ingest`
  // when an input path is configured and from `synth` otherwise. Throws
  // UsageError for an unknown stage and DataError naming the stage to run
  // first when a prior artifact is missing.
  void run(std::string_view stage);

  const PipelineConfig& config() const { return config_; }
  // Replaces the clustering.k_min..k_max range for the elbow stage.
  void set_elbow_ks(std::vector<size_t> ks) { elbow_ks_ = std::move(ks); }
  std::filesystem::path path(std::string_view artifact) const;

  void synth();
  void ingest();
  void clean();
  void split();
  void pairs();
  void train();
  void eval();
  void profile();
  void cluster();
  void elbow();
  void quality();
  void heatmap();
  void report();

 private:
  std::filesystem::path require(std::string_view artifact,
                                std::string_view stage) const;
  Corpus load_clean() const;
  CorpusSplit load_split() const;
  std::unique_ptr<SimilarityFunction> load_similarity() const;
  void echo_config() const;

  PipelineConfig config_;
  std::filesystem::path out_;
  std::ostream& log_;
  std::vector<size_t> elbow_ks_;
};

// Parses "a..b" (inclusive) or a comma-separated list into ascending k
// values. Throws UsageError on malformed input.
std::vector<size_t> parse_k_range(std::string_view text);

}  // namespace stylo

#endif  // STYLO_PIPELINE_H_
