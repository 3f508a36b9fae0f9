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

#include "stylo/pipeline.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "stylo/analysis.h"
#include "stylo/clustering.h"
#include "stylo/csv.h"
#include "stylo/error.h"
#include "stylo/metrics.h"
#include "stylo/profiles.h"
#include "stylo/rng.h"

namespace stylo {
namespace {

struct Field {
  std::string key;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

template <typename T>
T parse_value(std::string_view key, std::string_view raw) {
  const std::string text = trim(raw);
  const auto fail = [&] {
    return UsageError("config field " + std::string(key) + ": cannot parse '" +
                      text + "'");
  };
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw fail();
  } else if constexpr (std::is_floating_point_v<T>) {
    try {
      size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw fail();
      return v;
    } catch (const std::logic_error&) {
      throw fail();
    }
  } else {
    T v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw fail();
    }
    return v;
  }
}

template <typename T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return csv::format(v);
  } else {
    return std::to_string(v);
  }
}

template <typename T>
Field field(std::string key, T PipelineConfig::*member) {
  return {key,
          [key, member](PipelineConfig& c, std::string_view v) {
            c.*member = parse_value<T>(key, v);
          },
          [member](const PipelineConfig& c) { return format_value(c.*member); }};
}

const std::vector<Field>& fields() {
  using C = PipelineConfig;
  static const std::vector<Field> table = {
      field("run.seed", &C::seed),
      field("paths.input", &C::input),
      field("synth.students", &C::synth_students),
      field("synth.archetypes", &C::synth_archetypes),
      field("synth.months", &C::synth_months),
      field("synth.min_texts", &C::synth_min_texts),
      field("synth.max_texts", &C::synth_max_texts),
      field("synth.min_chars", &C::synth_min_chars),
      field("synth.max_chars", &C::synth_max_chars),
      field("synth.language_spread", &C::synth_language_spread),
      field("synth.author_spread", &C::synth_author_spread),
      field("synth.drift_spread", &C::synth_drift_spread),
      field("synth.length_growth", &C::synth_length_growth),
      field("corpus.strip_prefix", &C::strip_prefix),
      field("corpus.min_length", &C::min_length),
      field("corpus.max_length", &C::max_length),
      field("corpus.pseudonymize", &C::pseudonymize),
      field("corpus.min_texts", &C::min_texts),
      field("split.train", &C::split_train),
      field("split.val", &C::split_val),
      field("split.analyze", &C::split_analyze),
      field("similarity.model", &C::similarity_model),
      field("similarity.ngram", &C::ngram),
      field("similarity.preset", &C::preset),
      field("train.batch_size", &C::batch_size),
      field("train.max_epochs", &C::max_epochs),
      field("train.patience", &C::patience),
      field("train.max_pairs_per_epoch", &C::max_pairs_per_epoch),
      field("train.learning_rate", &C::learning_rate),
      field("train.vocab_min_count", &C::vocab_min_count),
      field("profiles.m", &C::m),
      field("profiles.step", &C::step),
      field("profiles.horizon", &C::horizon),
      field("clustering.k", &C::k),
      field("clustering.k_min", &C::k_min),
      field("clustering.k_max", &C::k_max),
      field("clustering.restarts", &C::restarts),
      field("clustering.max_iter", &C::max_iter),
      field("clustering.tol", &C::tol),
      field("analysis.pairs", &C::heatmap_pairs),
  };
  static const std::vector<Field> with_seeds = [] {
    std::vector<Field> all = table;
    for (std::string_view stage : kSeededStages) {
      const std::string key = "seeds." + std::string(stage);
      const std::string name(stage);
      all.push_back({key,
                     [key, name](PipelineConfig& c, std::string_view v) {
                       const std::string text = trim(v);
                       if (text.empty()) {
                         c.stage_seeds.erase(name);
                       } else {
                         c.stage_seeds[name] = parse_value<uint64_t>(key, text);
                       }
                     },
                     [name](const PipelineConfig& c) {
                       const auto it = c.stage_seeds.find(name);
                       return it == c.stage_seeds.end() ? std::string()
                                                        : std::to_string(it->second);
                     }});
    }
    return all;
  }();
  return with_seeds;
}

const Field& find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw UsageError("unknown config field '" + std::string(key) + "'");
}

void check(bool ok, std::string_view key, std::string_view requirement) {
  if (!ok) {
    throw UsageError("config field " + std::string(key) + " must " +
                     std::string(requirement));
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

ClusterModel load_cluster_model(const std::filesystem::path& assignments,
                                const std::filesystem::path& centroids) {
  ClusterModel model;
  auto a_in = open_in(assignments);
  for (const auto& row : read_assignments(a_in)) {
    model.student_ids.push_back(row.student_id);
    model.assignments.push_back(row.cluster);
  }
  auto c_in = open_in(centroids);
  model.centroids = read_centroids(c_in);
  for (size_t a : model.assignments) {
    if (a >= model.centroids.size()) {
      throw DataError("assignment refers to a cluster without a centroid");
    }
  }
  return model;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  find_field(key).set(*this, value);
}

std::string PipelineConfig::get(std::string_view key) const {
  return find_field(key).get(*this);
}

std::vector<std::string> PipelineConfig::keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

void PipelineConfig::validate() const {
  check(synth_students >= 3, "synth.students", "be at least 3");
  archetype_mix();
  check(synth_months > 0.0, "synth.months", "be positive");
  check(synth_min_texts >= 5 && synth_min_texts <= synth_max_texts &&
            synth_max_texts <= 40,
        "synth.min_texts", "satisfy 5 <= min_texts <= max_texts <= 40");
  check(synth_min_chars >= 1 && synth_min_chars <= synth_max_chars,
        "synth.min_chars", "satisfy 1 <= min_chars <= max_chars");
  check(synth_language_spread >= 0.0, "synth.language_spread", "be non-negative");
  check(synth_author_spread >= 0.0, "synth.author_spread", "be non-negative");
  check(synth_drift_spread >= 0.0, "synth.drift_spread", "be non-negative");
  check(synth_length_growth > -1.0 / std::max(synth_months, 1.0),
        "synth.length_growth", "keep text lengths positive");
  check(min_length < max_length, "corpus.min_length", "be below corpus.max_length");
  check(min_texts >= 1, "corpus.min_texts", "be at least 1");
  try {
    split_spec().validate();
  } catch (const UsageError& e) {
    throw UsageError(std::string("config section split: ") + e.what());
  }
  check(similarity_model == "siamese" || similarity_model == "ngram",
        "similarity.model", "be 'siamese' or 'ngram'");
  check(ngram >= 1, "similarity.ngram", "be at least 1");
  check(preset == "desk" || preset == "paper", "similarity.preset",
        "be 'desk' or 'paper'");
  try {
    train_config().validate();
  } catch (const UsageError& e) {
    throw UsageError(std::string("config section train: ") + e.what());
  }
  check(m >= 1, "profiles.m", "be at least 1");
  check(step > 0.0, "profiles.step", "be positive");
  check(horizon > 0.0, "profiles.horizon", "be positive");
  check(k_min >= 1 && k_min <= k_max, "clustering.k_min",
        "satisfy 1 <= k_min <= k_max");
  check(restarts >= 1, "clustering.restarts", "be at least 1");
  check(max_iter >= 1, "clustering.max_iter", "be at least 1");
  check(tol >= 0.0, "clustering.tol", "be non-negative");
  check(heatmap_pairs >= 1, "analysis.pairs", "be at least 1");
}

PipelineConfig PipelineConfig::parse(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  PipelineConfig cfg;
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) {
      throw UsageError("config key '" + section + "' must appear inside a section");
    }
    for (const auto& [name, value] : entries) {
      cfg.set(section + "." + name, value.data());
    }
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  return parse(in);
}

std::string PipelineConfig::to_ini() const {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = f.key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out += "\n";
      out += "[" + s + "]\n";
      section = s;
    }
    out += f.key.substr(dot + 1) + " = " + f.get(*this) + "\n";
  }
  return out;
}

uint64_t PipelineConfig::stage_seed(std::string_view stage) const {
  if (const auto it = stage_seeds.find(stage); it != stage_seeds.end()) {
    return it->second;
  }
  return derive_seed(seed, stage);
}

std::map<synth::Archetype, double> PipelineConfig::archetype_mix() const {
  std::map<synth::Archetype, double> mix;
  std::stringstream in(synth_archetypes);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    double weight = 1.0;
    if (const auto colon = item.find(':'); colon != std::string::npos) {
      weight = parse_value<double>("synth.archetypes", item.substr(colon + 1));
      item = trim(item.substr(0, colon));
    }
    check(weight >= 0.0, "synth.archetypes", "use non-negative weights");
    synth::Archetype a;
    try {
      a = synth::parse_archetype(item);
    } catch (const UsageError&) {
      throw UsageError("config field synth.archetypes: unknown archetype '" +
                       item + "'");
    }
    mix[a] += weight;
  }
  double total = 0.0;
  for (const auto& [a, w] : mix) total += w;
  check(total > 0.0, "synth.archetypes", "name at least one archetype");
  return mix;
}

synth::SynthOptions PipelineConfig::synth_options() const {
  synth::SynthOptions o;
  o.months = synth_months;
  o.min_texts = synth_min_texts;
  o.max_texts = synth_max_texts;
  o.min_chars = synth_min_chars;
  o.max_chars = synth_max_chars;
  o.language_spread = synth_language_spread;
  o.author_spread = synth_author_spread;
  o.drift_spread = synth_drift_spread;
  o.length_growth_per_month = synth_length_growth;
  return o;
}

CleaningConfig PipelineConfig::cleaning() const {
  CleaningConfig c;
  c.strip_prefix = strip_prefix;
  c.min_exclusive = min_length;
  c.max_exclusive = max_length;
  c.pseudonymize = pseudonymize;
  return c;
}

SplitSpec PipelineConfig::split_spec() const {
  return {split_train, split_val, split_analyze, stage_seed("split")};
}

TrainConfig PipelineConfig::train_config() const {
  TrainConfig t;
  t.learning_rate = learning_rate;
  t.batch_size = batch_size;
  t.max_epochs = max_epochs;
  t.patience = patience;
  t.max_pairs_per_epoch = max_pairs_per_epoch;
  t.vocab_min_count = vocab_min_count;
  t.seed = stage_seed("train");
  return t;
}

Architecture PipelineConfig::architecture() const {
  return preset == "paper" ? Architecture::paper() : Architecture::desk();
}

std::vector<size_t> parse_k_range(std::string_view text) {
  std::vector<size_t> ks;
  const std::string s = trim(text);
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = parse_value<size_t>("--k", s.substr(0, dots));
    const auto hi = parse_value<size_t>("--k", s.substr(dots + 2));
    if (lo == 0 || lo > hi) throw UsageError("--k range must satisfy 1 <= a <= b");
    for (size_t k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
  }
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto k = parse_value<size_t>("--k", item);
    if (k == 0) throw UsageError("--k values must be positive");
    ks.push_back(k);
  }
  if (ks.empty()) throw UsageError("--k needs at least one value");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

Pipeline::Pipeline(PipelineConfig config, std::filesystem::path out,
                   std::ostream& log)
    : config_(std::move(config)), out_(std::move(out)), log_(log) {
  config_.validate();
  if (!config_.input.empty() &&
      std::filesystem::weakly_canonical(config_.input) ==
          std::filesystem::weakly_canonical(path(artifacts::kRaw))) {
    throw UsageError("config field paths.input must differ from the output " +
                     path(artifacts::kRaw).string());
  }
}

std::filesystem::path Pipeline::path(std::string_view artifact) const {
  return out_ / artifact;
}

std::filesystem::path Pipeline::require(std::string_view artifact,
                                        std::string_view stage) const {
  auto p = path(artifact);
  if (!std::filesystem::exists(p)) {
    throw DataError("missing " + p.string() + "; run the '" + std::string(stage) +
                    "' stage first");
  }
  return p;
}

void Pipeline::echo_config() const {
  std::filesystem::create_directories(out_);
  auto out = open_out(path(artifacts::kConfig));
  out << config_.to_ini();
}

void Pipeline::run(std::string_view stage) {
  echo_config();
  static const std::map<std::string_view, void (Pipeline::*)()> kRunners = {
      {"synth", &Pipeline::synth},     {"ingest", &Pipeline::ingest},
      {"clean", &Pipeline::clean},     {"split", &Pipeline::split},
      {"pairs", &Pipeline::pairs},     {"train", &Pipeline::train},
      {"eval", &Pipeline::eval},       {"profile", &Pipeline::profile},
      {"cluster", &Pipeline::cluster}, {"elbow", &Pipeline::elbow},
      {"quality", &Pipeline::quality}, {"heatmap", &Pipeline::heatmap},
      {"report", &Pipeline::report},
  };
  if (stage == "all") {
    const std::vector<std::string_view> chain = {
        config_.input.empty() ? "synth" : "ingest",
        "clean", "split", "pairs", "train", "eval", "profile", "elbow",
        "cluster", "quality", "heatmap", "report"};
    for (const auto s : chain) run(s);
    return;
  }
  const auto it = kRunners.find(stage);
  if (it == kRunners.end()) {
    throw UsageError("unknown stage '" + std::string(stage) + "'");
  }
  log_ << "[" << stage << "]\n";
  (this->*(it->second))();
}

void Pipeline::synth() {
  const auto result = synth::gen_corpus(config_.synth_students, config_.archetype_mix(),
                                        config_.stage_seed("synth"),
                                        config_.synth_options());
  serialize(result.corpus, path(artifacts::kRaw));
  auto labels = open_out(path(artifacts::kLabels));
  synth::write_labels(result.labels, labels);
  log_ << "  " << result.corpus.students.size() << " students, "
       << result.corpus.num_texts() << " texts\n";
}

void Pipeline::ingest() {
  if (config_.input.empty()) {
    throw UsageError("config field paths.input must name a JSONL corpus for ingest");
  }
  const auto result = stylo::ingest(std::filesystem::path(config_.input));
  serialize(result.corpus, path(artifacts::kRaw));
  log_ << "  " << result.corpus.students.size() << " students, "
       << result.corpus.num_texts() << " texts, " << result.duplicates
       << " duplicates dropped\n";
}

void Pipeline::clean() {
  const auto raw = stylo::ingest(require(artifacts::kRaw, "synth' or 'ingest"));
  CleaningReport report;
  Corpus cleaned = clean_corpus(raw.corpus, config_.cleaning(), &report);
  const size_t before = cleaned.students.size();
  cleaned = drop_sparse_students(std::move(cleaned), config_.min_texts);
  report.students_dropped += before - cleaned.students.size();
  serialize(cleaned, path(artifacts::kClean));
  auto out = open_out(path(artifacts::kCleaning));
  csv::write_row(out, {"accepted", "rejected_short", "rejected_long",
                       "students_dropped", "students_kept"});
  csv::write_row(out, {std::to_string(report.accepted),
                       std::to_string(report.rejected_short),
                       std::to_string(report.rejected_long),
                       std::to_string(report.students_dropped),
                       std::to_string(cleaned.students.size())});
  log_ << "  kept " << cleaned.students.size() << " students, "
       << cleaned.num_texts() << " texts\n";
}

Corpus Pipeline::load_clean() const {
  return stylo::ingest(require(artifacts::kClean, "clean")).corpus;
}

CorpusSplit Pipeline::load_split() const {
  const Corpus corpus = load_clean();
  auto in = open_in(require(artifacts::kSplit, "split"));
  return apply_manifest(corpus, read_manifest(in));
}

void Pipeline::split() {
  const Corpus corpus = load_clean();
  const CorpusSplit s = split_authors(corpus, config_.split_spec());
  auto out = open_out(path(artifacts::kSplit));
  write_manifest(manifest_of(s), out);
  log_ << "  train " << s.train.students.size() << ", val "
       << s.val.students.size() << ", analyze " << s.analyze.students.size()
       << " students\n";
}

void Pipeline::pairs() {
  const CorpusSplit s = load_split();
  const uint64_t seed = config_.stage_seed("pairs");
  const std::pair<const Corpus*, std::string_view> parts[] = {
      {&s.train, artifacts::kPairsTrain},
      {&s.val, artifacts::kPairsVal},
      {&s.analyze, artifacts::kPairsAnalyze}};
  for (size_t i = 0; i < 3; ++i) {
    const auto pairs = gen_sim_instances(*parts[i].first, derive_seed(seed, i));
    auto out = open_out(path(parts[i].second));
    write_sim_instances(*parts[i].first, pairs, out);
    log_ << "  " << parts[i].second << ": " << pairs.size() << " pairs\n";
  }
}

void Pipeline::train() {
  if (config_.similarity_model != "siamese") {
    log_ << "  n-gram similarity needs no training\n";
    return;
  }
  const CorpusSplit s = load_split();
  auto train_in = open_in(require(artifacts::kPairsTrain, "pairs"));
  auto val_in = open_in(require(artifacts::kPairsVal, "pairs"));
  const auto train_pairs = read_sim_instances(s.train, train_in);
  const auto val_pairs = read_sim_instances(s.val, val_in);
  const TrainResult result = stylo::train(s.train, train_pairs, s.val, val_pairs,
                                          config_.train_config(),
                                          config_.architecture());
  save_model(result.model, path(artifacts::kModel));
  auto out = open_out(path(artifacts::kTrainingLog));
  write_training_log(result.log, out);
  for (const auto& e : result.log.epochs) {
    log_ << "  epoch " << e.epoch << ": train loss " << e.train_loss
         << ", val loss " << e.val_loss << ", val acc " << e.val_acc << "\n";
  }
  log_ << "  kept epoch " << result.log.selected_epoch << "\n";
}

std::unique_ptr<SimilarityFunction> Pipeline::load_similarity() const {
  if (config_.similarity_model == "ngram") {
    return std::make_unique<NgramCosineSimilarity>(config_.ngram);
  }
  auto model = std::make_shared<const SiameseModel>(
      load_model(require(artifacts::kModel, "train")));
  return std::make_unique<SiameseSimilarity>(std::move(model));
}

void Pipeline::eval() {
  const CorpusSplit s = load_split();
  const auto model = load_similarity();
  auto out = open_out(path(artifacts::kEval));
  csv::write_row(out, {"split", "loss", "accuracy", "n_pairs"});
  const std::tuple<std::string_view, const Corpus*, std::string_view> parts[] = {
      {"train", &s.train, artifacts::kPairsTrain},
      {"val", &s.val, artifacts::kPairsVal},
      {"analyze", &s.analyze, artifacts::kPairsAnalyze}};
  for (const auto& [name, corpus, file] : parts) {
    auto in = open_in(require(file, "pairs"));
    const auto pairs = read_sim_instances(*corpus, in);
    const EvalResult r = evaluate(*model, *corpus, pairs);
    csv::write_row(out, {std::string(name), csv::format(r.loss),
                         csv::format(r.accuracy), std::to_string(pairs.size())});
    log_ << "  " << name << ": loss " << r.loss << ", accuracy " << r.accuracy << "\n";
  }
}

void Pipeline::profile() {
  const CorpusSplit s = load_split();
  const auto model = load_similarity();
  const auto profiles = build_profiles(s.analyze, *model, config_.m);
  std::vector<ApproxProfile> approx;
  for (const auto& p : profiles) approx.push_back(interpolate(p, config_.step));
  auto out = open_out(path(artifacts::kProfiles));
  write_profiles(profiles, out);
  auto aout = open_out(path(artifacts::kApprox));
  write_approx_profiles(approx, aout);
  log_ << "  " << profiles.size() << " profiles\n";
}

void Pipeline::elbow() {
  auto in = open_in(require(artifacts::kApprox, "profile"));
  const auto profiles = read_approx_profiles(in, config_.step);
  std::vector<size_t> ks = elbow_ks_;
  if (ks.empty()) {
    for (size_t k = config_.k_min; k <= config_.k_max; ++k) ks.push_back(k);
  }
  const ElbowScan scan =
      elbow_scan(profiles, ks, config_.restarts, config_.stage_seed("elbow"),
                 {config_.max_iter, config_.tol});
  auto out = open_out(path(artifacts::kElbow));
  write_elbow(scan, out);
  for (const auto& p : scan.points) log_ << "  k=" << p.k << ": E=" << p.error << "\n";
  log_ << "  elbow at k=" << scan.selected_k << "\n";
}

void Pipeline::cluster() {
  auto in = open_in(require(artifacts::kApprox, "profile"));
  const auto profiles = read_approx_profiles(in, config_.step);
  size_t k = config_.k;
  if (k == 0) {
    auto ein = open_in(require(artifacts::kElbow, "elbow"));
    const auto points = read_elbow(ein);
    if (points.empty()) throw DataError("elbow file has no rows");
    k = points[select_elbow(points)].k;
  }
  if (k > profiles.size()) {
    throw UsageError("config field clustering.k exceeds the number of profiles (" +
                     std::to_string(profiles.size()) + ")");
  }
  const ClusterModel model = kmeans_best(profiles, k, config_.restarts,
                                         config_.stage_seed("cluster"),
                                         {config_.max_iter, config_.tol});
  auto aout = open_out(path(artifacts::kAssignments));
  write_assignments(model, aout);
  auto cout = open_out(path(artifacts::kCentroids));
  write_centroids(model, cout);
  auto hout = open_out(path(artifacts::kClusterHistory));
  csv::write_row(hout, {"iteration", "error"});
  for (size_t i = 0; i < model.error_history.size(); ++i) {
    csv::write_row(hout, {std::to_string(i), csv::format(model.error_history[i])});
  }
  log_ << "  k=" << k << ", E=" << model.error << ", sizes";
  for (size_t n : model.cluster_sizes()) log_ << " " << n;
  log_ << "\n";
}

void Pipeline::quality() {
  const CorpusSplit s = load_split();
  const ClusterModel model =
      load_cluster_model(require(artifacts::kAssignments, "cluster"),
                         require(artifacts::kCentroids, "cluster"));
  auto in = open_in(require(artifacts::kApprox, "profile"));
  const auto profiles = read_approx_profiles(in, config_.step);

  std::vector<TextIndicators> rows;
  const HeuristicDanishTagger tagger;
  for (const auto& student : s.analyze.students) {
    if (student.texts.size() < config_.m) continue;
    const Timestamp origin = student.texts[config_.m - 1].submitted_at;
    for (const auto& text : student.texts) {
      const double tau = months_between(origin, text.submitted_at);
      if (tau < 0.0) continue;
      const TextStats stats = compute_stats(text.body, tagger);
      if (stats.n_sentences == 0) continue;
      rows.push_back({student.student_id, tau, indicators(stats)});
    }
  }
  auto out = open_out(path(artifacts::kTextIndicators));
  write_text_indicators(rows, out);

  const auto reports = cluster_report(model, profiles, rows, config_.step,
                                      config_.horizon);
  std::vector<std::vector<CurvePoint>> curves;
  for (const auto& r : reports) curves.push_back(r.indicators);
  auto cout = open_out(path(artifacts::kQualityCurves));
  write_quality_curves(curves, cout);
  log_ << "  " << rows.size() << " texts scored\n";
}

void Pipeline::heatmap() {
  const CorpusSplit s = load_split();
  const auto model = load_similarity();
  const PairSampling sampling = sample_pairs(s.analyze, config_.heatmap_pairs, *model,
                                             config_.stage_seed("heatmap"));
  auto sout = open_out(path(artifacts::kPairSamples));
  write_pair_samples(s.analyze, sampling.samples, sout);
  const HeatMap map = build_heatmap(sampling.samples);
  auto hout = open_out(path(artifacts::kHeatmap));
  write_heatmap(map, hout);
  auto svg = open_out(path(artifacts::kHeatmapSvg));
  svg << heatmap_svg(map);
  auto rout = open_out(path(artifacts::kRandomPairs));
  csv::write_row(rout, {"n_pairs", "mean_similarity"});
  csv::write_row(rout, {std::to_string(sampling.samples.size()),
                        csv::format(sampling.mean)});
  log_ << "  mean cross-author similarity " << sampling.mean << " over "
       << sampling.samples.size() << " pairs\n";
}

void Pipeline::report() {
  const Corpus corpus = load_clean();
  const ClusterModel model =
      load_cluster_model(require(artifacts::kAssignments, "cluster"),
                         require(artifacts::kCentroids, "cluster"));
  auto in = open_in(require(artifacts::kApprox, "profile"));
  const auto profiles = read_approx_profiles(in, config_.step);
  auto tin = open_in(require(artifacts::kTextIndicators, "quality"));
  const auto texts = read_text_indicators(tin);
  const auto reports = cluster_report(model, profiles, texts, config_.step,
                                      config_.horizon);
  write_cluster_report(reports, config_.step, path(artifacts::kReportDir));
  const CorpusStats stats = corpus_stats(corpus);
  auto out = open_out(path(artifacts::kCorpusStats));
  write_corpus_stats(stats, out);
  auto svg = open_out(path(artifacts::kCorpusStatsSvg));
  svg << corpus_stats_svg(stats);
  log_ << "  " << reports.size() << " cluster reports\n";
}

}  // namespace stylo
