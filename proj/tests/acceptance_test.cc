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

// Acceptance checks. Each check prints one line:
//   criterion <id>: PASS|FAIL <details>
// Run a single check with --only <id>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gradient_oracle.h"
#include "stylo/analysis.h"
#include "stylo/clustering.h"
#include "stylo/metrics.h"
#include "stylo/pipeline.h"
#include "stylo/profiles.h"
#include "stylo/rng.h"
#include "stylo/siamese.h"
#include "stylo/synth.h"
#include "stylo/trainer.h"
#include "test_support.h"

namespace stylo {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// 1. SMOG values.
Outcome smog_exactness() {
  const double zero = smog(0, 30);
  const double full = smog(30, 30);
  // Hand computation, independent of the library constants.
  const double hand_full = 1.0430 * std::sqrt(30.0 * 30.0 / 30.0) + 3.1291;
  const bool zero_ok = std::abs(zero - 3.1291) <= 1e-4;
  const bool literal_ok = std::abs(full - 8.8417) <= 1e-4;
  const bool hand_ok = std::abs(full - hand_full) <= 1e-12;
  return {zero_ok && literal_ok && hand_ok,
          "smog(0,30)=" + fmt("%.6f", zero) + " smog(30,30)=" + fmt("%.6f", full) +
              " |smog(30,30)-8.8417|=" + fmt("%.2e", std::abs(full - 8.8417)) +
              " (tol 1e-4) |smog(30,30)-hand|=" + fmt("%.1e", std::abs(full - hand_full))};
}

// 2. Symmetry and self-constancy of the siamese similarity.
Outcome similarity_symmetry() {
  const Corpus c = testing::synthetic_corpus(40, {{synth::Archetype::kStable, 1.0}}, 21);
  std::vector<const Text*> texts;
  for (const auto& s : c.students) {
    for (const auto& t : s.texts) texts.push_back(&t);
  }
  SiameseModel model{CharVocab::build(c), {}};
  model.params = SiameseParams(Architecture::desk(), model.vocab.size());
  model.params.initialize(5);
  // Non-zero biases keep the self-similarity away from the trivial 0.5.
  Rng rng(8);
  for (size_t l = 0; l < model.params.arch().dense_layers; ++l) {
    for (double& b : model.params.dense_bias(l)) b = rng.uniform(-0.5, 0.5);
  }
  for (double& b : model.params.output_bias()) b = rng.uniform(-0.5, 0.5);

  size_t asymmetric = 0;
  for (int i = 0; i < 1000; ++i) {
    const Text& a = *texts[rng.index(texts.size())];
    const Text& b = *texts[rng.index(texts.size())];
    if (model.similarity(a.body, b.body) != model.similarity(b.body, a.body)) ++asymmetric;
  }
  std::vector<double> self;
  for (size_t i = 0; i < 100; ++i) {
    const Text& t = *texts[(i * 7919) % texts.size()];
    self.push_back(model.similarity(t.body, t.body));
  }
  const bool constant = std::all_of(self.begin(), self.end(),
                                    [&](double s) { return s == self.front(); });
  return {asymmetric == 0 && constant,
          std::to_string(asymmetric) + "/1000 asymmetric pairs, self-similarity " +
              (constant ? "constant at " + fmt("%.17g", self.front()) : std::string("varies"))};
}

// 3. Backprop against central finite differences.
Outcome gradient_check() {
  const CharVocab v = testing::tiny_vocab();
  double worst = 0.0;
  std::string worst_group;
  for (uint64_t seed : {7u, 8u, 9u}) {
    for (int label : {0, 1}) {
      SiameseParams p(testing::tiny_architecture(), v.size());
      p.initialize(seed);
      for (const auto& e : testing::gradient_check(p, v.encode("abc dea bcade ab cd eeab"),
                                                   v.encode("dd cab eab cdea bbe acd"), label)) {
        if (e.error > worst) {
          worst = e.error;
          worst_group = e.group;
        }
      }
    }
  }
  return {worst < 1e-4, "max relative error " + fmt("%.3e", worst) + " (" + worst_group +
                            ") over 3 seeds x 2 labels, bound 1e-4"};
}

// 4. Training on a separable two-archetype corpus.
Outcome synthetic_training() {
  testing::TempDir dir;
  PipelineConfig cfg;
  cfg.synth_students = 60;
  cfg.synth_archetypes = "stable,slow_decline";
  cfg.preset = "desk";
  cfg.max_pairs_per_epoch = 2000;
  cfg.max_epochs = 8;
  std::ostringstream log;
  for (const char* stage : {"synth", "clean", "split", "pairs", "train"}) {
    Pipeline(cfg, dir.path(), log).run(stage);
  }
  std::ifstream in(dir.path() / std::string(artifacts::kTrainingLog));
  const TrainingLog tl = read_training_log(in);
  const EpochMetrics& e = tl.epochs.at(tl.selected_epoch - 1);
  const double ln2 = std::log(2.0);
  return {e.val_acc >= 0.90 && e.val_loss < ln2,
          "selected epoch " + std::to_string(e.epoch) + ": val accuracy " +
              fmt("%.4f", e.val_acc) + " (>= 0.90), val loss " + fmt("%.4f", e.val_loss) +
              " (< " + fmt("%.4f", ln2) + ")"};
}

std::vector<ApproxProfile> random_profiles(Rng& rng, size_t n, size_t max_len) {
  std::vector<ApproxProfile> out;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> v(1 + rng.index(max_len));
    for (auto& x : v) x = rng.uniform();
    out.push_back({"p" + std::to_string(i), kDefaultGridStep, v});
  }
  return out;
}

// 5a. Cluster error never increases.
Outcome kmeans_monotone() {
  Rng rng(51);
  size_t bad_runs = 0;
  double worst = 0.0;
  for (int run = 0; run < 50; ++run) {
    const auto ps = random_profiles(rng, 20 + rng.index(30), 60);
    const size_t k = 2 + rng.index(4);
    const auto m = kmeans(ps, k, rng.next());
    bool bad = false;
    for (size_t i = 1; i < m.error_history.size(); ++i) {
      const double rise = m.error_history[i] - m.error_history[i - 1];
      if (rise > 1e-12) {
        bad = true;
        worst = std::max(worst, rise);
      }
    }
    bad_runs += bad;
  }
  return {bad_runs == 0, std::to_string(bad_runs) + "/50 runs with an increase, largest " +
                             fmt("%.3e", worst) + " (slack 1e-12)"};
}

// 5b. Assignment equals exhaustive nearest-centroid search.
Outcome kmeans_assignment() {
  Rng rng(52);
  size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto ps = random_profiles(rng, 1 + rng.index(8), 8);
    const size_t k = 1 + rng.index(3);
    std::vector<Centroid> cs;
    for (const auto& p : random_profiles(rng, k, 8)) cs.push_back(p.values);
    const auto got = assign(ps, cs);
    for (size_t i = 0; i < ps.size(); ++i) {
      size_t best = 0;
      double best_d = INFINITY;
      for (size_t r = 0; r < cs.size(); ++r) {
        double s = 0.0;
        for (size_t j = 0; j < std::min(cs[r].size(), ps[i].values.size()); ++j) {
          s += (cs[r][j] - ps[i].values[j]) * (cs[r][j] - ps[i].values[j]);
        }
        if (std::sqrt(s) < best_d) {
          best_d = std::sqrt(s);
          best = r;
        }
      }
      mismatches += got[i] != best;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 200 trials"};
}

// 5c. k = n gives zero error.
Outcome kmeans_k_equals_n() {
  Rng rng(53);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto ps = random_profiles(rng, 2 + rng.index(15), 30);
    worst = std::max(worst, kmeans(ps, ps.size(), rng.next()).error);
  }
  return {worst == 0.0, "largest E_C with k = n over 20 trials: " + fmt("%.3g", worst)};
}

// 6. Planted archetypes recovered with the n-gram baseline.
Outcome planted_recovery() {
  synth::SynthOptions opt;
  opt.min_texts = 12;
  opt.max_texts = 20;
  const uint64_t seed = 1;
  const auto sc = synth::gen_corpus(90,
                                    {{synth::Archetype::kStable, 1.0},
                                     {synth::Archetype::kSuddenDrop, 1.0},
                                     {synth::Archetype::kSteadyDecline, 1.0}},
                                    seed, opt);
  const Corpus c = clean_corpus(sc.corpus, CleaningConfig{});
  const NgramCosineSimilarity sim(4);
  std::vector<ApproxProfile> ap;
  for (const auto& p : build_profiles(c, sim, 2)) ap.push_back(interpolate(p));
  std::map<std::string, size_t> planted;
  for (const auto& l : sc.labels) planted[l.student_id] = static_cast<size_t>(l.archetype);
  std::vector<size_t> truth;
  for (const auto& p : ap) truth.push_back(planted.at(p.student_id));
  const auto model = kmeans_best(ap, 3, 10, seed);
  const double ari = adjusted_rand_index(model.assignments, truth);
  const auto scan = elbow_scan(ap, {2, 3, 4, 5, 6, 7, 8, 9}, 10, seed);
  return {ari >= 0.9 && scan.selected_k == 3,
          std::to_string(ap.size()) + " profiles, ARI " + fmt("%.4f", ari) +
              " (>= 0.9), elbow selects k = " + std::to_string(scan.selected_k)};
}

// 7. Interpolation at knots and the midpoint example.
Outcome interpolation_fidelity() {
  const auto mid = interpolate(DevelopmentProfile{"a", 2, {{0.0, 0.8}, {0.1, 0.6}}});
  const bool midpoint = mid.values.size() == 3 && mid.values[1] == 0.7;
  Rng rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    DevelopmentProfile p{"r", 2, {{0.0, rng.uniform()}}};
    size_t g = 0;
    for (int j = 0; j < 10; ++j) {
      g += 1 + rng.index(40);
      // Every other knot sits exactly on the grid.
      const double tau = j % 2 == 0 ? g * kDefaultGridStep : (g + rng.uniform(0.05, 0.95)) * kDefaultGridStep;
      p.points.push_back({tau, rng.uniform()});
    }
    const auto a = interpolate(p);
    for (const auto& pt : p.points) {
      const double pos = pt.tau / kDefaultGridStep;
      const double nearest = std::round(pos);
      if (std::abs(pos - nearest) > 1e-9) continue;
      worst = std::max(worst, std::abs(a.values.at(static_cast<size_t>(nearest)) - pt.p));
    }
  }
  return {midpoint && worst <= 1e-9,
          std::string("midpoint ") + (midpoint ? "0.7 exactly" : "wrong") +
              ", largest knot error " + fmt("%.2e", worst) + " (tol 1e-9)"};
}

// 8. Heat map flatness on a corpus without drift.
Outcome heatmap_flatness_check() {
  const Corpus c = testing::synthetic_corpus(300, {{synth::Archetype::kStable, 1.0}}, 81);
  const NgramCosineSimilarity sim(4);
  const auto sampled = sample_pairs(c, 200000, sim, 82);
  const HeatMap map = build_heatmap(sampled.samples);
  const Flatness f = heatmap_flatness(map, 30, 3.0);

  // Control: the same rule on the same samples with similarities shuffled,
  // which removes any month structure. Reported for context only.
  std::vector<double> values;
  for (const auto& p : sampled.samples) values.push_back(p.similarity);
  int control_pass = 0;
  for (uint64_t rep = 0; rep < 20; ++rep) {
    Rng rng(rep);
    rng.shuffle(std::span<double>(values));
    auto shuffled = sampled.samples;
    for (size_t i = 0; i < shuffled.size(); ++i) shuffled[i].similarity = values[i];
    control_pass += heatmap_flatness(build_heatmap(shuffled), 30, 3.0).cells_over == 0;
  }
  return {f.cells_over == 0 && f.cells_checked > 0,
          std::to_string(f.cells_checked) + " cells with >= 30 samples, " +
              std::to_string(f.cells_over) + " beyond 3 SE, max |z| " + fmt("%.3f", f.max_z) +
              "; shuffled-similarity control passes " + std::to_string(control_pass) + "/20"};
}

// 9. Two identical runs produce identical CSVs.
Outcome pipeline_determinism() {
  PipelineConfig cfg;
  cfg.synth_students = 30;
  cfg.max_epochs = 2;
  cfg.max_pairs_per_epoch = 300;
  cfg.heatmap_pairs = 2000;
  cfg.restarts = 3;
  testing::TempDir a, b;
  std::ostringstream log;
  Pipeline(cfg, a.path(), log).run("all");
  Pipeline(cfg, b.path(), log).run("all");
  size_t compared = 0, differing = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    ++compared;
    if (testing::read_file(e.path()) != testing::read_file(b.path() / rel)) {
      ++differing;
    }
  }
  return {differing == 0 && compared > 0, std::to_string(compared) + " CSV files compared, " +
                                              std::to_string(differing) + " differ"};
}

// 10. The full-size network on one batch.
Outcome full_size_network() {
  const Corpus c = testing::synthetic_corpus(8, {{synth::Archetype::kStable, 1.0}}, 10);
  const auto pairs = gen_sim_instances(c, 11);
  SiameseModel model{CharVocab::build(c), {}};
  model.params = SiameseParams(Architecture::paper(), model.vocab.size());
  model.params.initialize(12);
  const SiameseNetwork net(model.params);
  SiameseParams grads(model.params.arch(), model.vocab.size());
  grads.zero();
  Rng dropout(13);
  const size_t batch = std::min<size_t>(32, pairs.size());
  double loss = 0.0;
  size_t encoding = 0;
  for (size_t i = 0; i < batch; ++i) {
    const auto ea = net.encode(model.vocab.encode(text_at(c, pairs[i].a).body));
    const auto eb = net.encode(model.vocab.encode(text_at(c, pairs[i].b).body));
    encoding = ea.features.size();
    loss += net.pair_loss_and_grad(ea, eb, pairs[i].label, grads, &dropout);
  }
  bool finite = std::isfinite(loss);
  double norm = 0.0;
  for (double g : grads.flat()) {
    finite = finite && std::isfinite(g);
    norm += g * g;
  }
  return {finite && encoding == 1200 && model.params.arch().encoding_size() == 1200,
          "batch of " + std::to_string(batch) + " pairs, mean loss " + fmt("%.4f", loss / batch) +
              ", gradient norm " + fmt("%.4g", std::sqrt(norm)) + ", encoding length " +
              std::to_string(encoding) + ", " + std::to_string(model.params.flat().size()) +
              " parameters"};
}

struct Criterion {
  std::string id;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace stylo

int main(int argc, char** argv) {
  using namespace stylo;
  const std::vector<Criterion> criteria = {
      {"1", smog_exactness},        {"2", similarity_symmetry},
      {"3", gradient_check},        {"4", synthetic_training},
      {"5a", kmeans_monotone},      {"5b", kmeans_assignment},
      {"5c", kmeans_k_equals_n},    {"6", planted_recovery},
      {"7", interpolation_fidelity}, {"8", heatmap_flatness_check},
      {"9", pipeline_determinism},  {"10", full_size_network},
  };

  CLI::App app{"Acceptance checks"};
  std::string only;
  app.add_option("--only", only, "run a single criterion by id");
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  bool ran = false;
  for (const auto& c : criteria) {
    if (!only.empty() && c.id != only) continue;
    ran = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail
              << " [" << fmt("%.1f", secs) << " s]" << std::endl;
    all_pass = all_pass && o.pass;
  }
  if (!ran) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
