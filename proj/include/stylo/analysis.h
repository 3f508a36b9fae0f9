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

// Cross-author similarity studies and the report artifacts derived from
// clustered profiles.

#ifndef STYLO_ANALYSIS_H_
#define STYLO_ANALYSIS_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "stylo/clustering.h"
#include "stylo/corpus.h"
#include "stylo/metrics.h"
#include "stylo/profiles.h"
#include "stylo/similarity.h"

namespace stylo {

struct PairSample {
  TextRef a;
  TextRef b;
  // Months since each author's own first hand-in.
  double months_a = 0.0;
  double months_b = 0.0;
  double similarity = 0.0;

  friend bool operator==(const PairSample&, const PairSample&) = default;
};

struct PairSampling {
  std::vector<PairSample> samples;
  double mean = 0.0;
};

// n text pairs drawn uniformly from all ordered pairs of texts with
// different authors. Throws DataError with fewer than two students that have
// texts and UndefinedMetricError for n = 0.
PairSampling sample_pairs(const Corpus& analyze, size_t n,
                          const SimilarityFunction& model, uint64_t seed);

// CSV "student_a,text_a,student_b,text_b,months_a,months_b,similarity".
void write_pair_samples(const Corpus& corpus, std::span<const PairSample> samples,
                        std::ostream& out);
std::vector<PairSample> read_pair_samples(const Corpus& corpus, std::istream& in);

inline constexpr size_t kHeatmapMonths = 30;

// Cells are stored once per unordered month pair, at (min, max).
class HeatMap {
 public:
  struct Cell {
    size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
  };

  void add(double months_a, double months_b, double similarity);

  // Symmetric lookup; nullopt for a cell without samples.
  std::optional<double> mean(size_t i, size_t j) const;
  const Cell& cell(size_t i, size_t j) const;
  // Pooled mean over every binned sample.
  double global_mean() const;
  size_t total_count() const;

 private:
  static size_t slot(size_t i, size_t j);
  std::array<Cell, kHeatmapMonths * kHeatmapMonths> cells_{};
};

// Samples outside months [0, 30) are ignored. Throws DataError when samples
// is empty.
HeatMap build_heatmap(std::span<const PairSample> samples);

// Largest |cell mean - global mean| / standard error over cells with at
// least min_count samples; 0 when no cell qualifies.
struct Flatness {
  double max_z = 0.0;
  size_t cells_checked = 0;
  size_t cells_over = 0;
};
Flatness heatmap_flatness(const HeatMap& map, size_t min_count = 30,
                          double z_limit = 3.0);

// CSV "month_a,month_b,mean_sim,count", 0-based months with
// month_a <= month_b, non-empty cells only.
void write_heatmap(const HeatMap& map, std::ostream& out);
std::string heatmap_svg(const HeatMap& map);

// Linear interpolation between order statistics at rank q * (n - 1).
// Throws DataError for an empty sample; q must lie in [0, 1].
double percentile(std::vector<double> values, double q);

struct BandPoint {
  size_t grid_index = 0;
  double p5 = 0.0;
  double p95 = 0.0;
  size_t n_members = 0;
};

struct ClusterReport {
  size_t cluster = 0;
  size_t n_members = 0;
  Centroid centroid;
  std::vector<BandPoint> band;
  std::vector<CurvePoint> indicators;
};

// One report per cluster, cut at `horizon` months. Band values at a grid
// point use the members whose approximate profile reaches it. Text
// indicators are matched to members by student id.
std::vector<ClusterReport> cluster_report(
    const ClusterModel& model, const std::vector<ApproxProfile>& profiles,
    std::span<const TextIndicators> texts, double step = kDefaultGridStep,
    double horizon = kAnalysisHorizon);

// Writes <dir>/<r>/{centroid.csv,band.csv,indicators.csv,plot.svg}.
void write_cluster_report(const std::vector<ClusterReport>& reports,
                          double step, const std::filesystem::path& dir);

struct CorpusStats {
  std::map<size_t, size_t> texts_per_student;
  // Keyed by whole months since the author's first hand-in.
  std::map<size_t, size_t> hand_ins_per_month;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats corpus_stats(const Corpus& corpus);

// CSV "histogram,bin,count" with histogram in {texts_per_student,
// hand_ins_per_month}.
void write_corpus_stats(const CorpusStats& stats, std::ostream& out);
CorpusStats read_corpus_stats(std::istream& in);
std::string corpus_stats_svg(const CorpusStats& stats);

}  // namespace stylo

#endif  // STYLO_ANALYSIS_H_
