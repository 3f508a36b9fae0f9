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

#include "stylo/analysis.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "stylo/csv.h"
#include "stylo/error.h"
#include "stylo/rng.h"
#include "stylo/svg.h"

namespace stylo {
namespace {

Timestamp first_hand_in(const StudentRecord& s) {
  Timestamp first = s.texts.front().submitted_at;
  for (const auto& t : s.texts) first = std::min(first, t.submitted_at);
  return first;
}

size_t month_bin(double months) {
  return static_cast<size_t>(std::floor(std::max(0.0, months)));
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << body;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

PairSampling sample_pairs(const Corpus& analyze, size_t n,
                          const SimilarityFunction& model, uint64_t seed) {
  std::vector<TextRef> refs;
  std::vector<Timestamp> origin(analyze.students.size());
  size_t authors = 0;
  for (uint32_t s = 0; s < analyze.students.size(); ++s) {
    const auto& student = analyze.students[s];
    if (student.texts.empty()) continue;
    ++authors;
    origin[s] = first_hand_in(student);
    for (uint32_t t = 0; t < student.texts.size(); ++t) refs.push_back({s, t});
  }
  if (authors < 2) {
    throw DataError("pair sampling needs at least 2 students with texts");
  }
  if (n == 0) {
    throw UndefinedMetricError("mean similarity is undefined for 0 sampled pairs");
  }
  Rng rng(seed);
  PairSampling out;
  out.samples.reserve(n);
  double sum = 0.0;
  while (out.samples.size() < n) {
    const TextRef a = refs[rng.index(refs.size())];
    const TextRef b = refs[rng.index(refs.size())];
    if (a.student == b.student) continue;
    const Text& ta = text_at(analyze, a);
    const Text& tb = text_at(analyze, b);
    PairSample p{a, b, months_between(origin[a.student], ta.submitted_at),
                 months_between(origin[b.student], tb.submitted_at),
                 model.similarity(ta.body, tb.body)};
    sum += p.similarity;
    out.samples.push_back(p);
  }
  out.mean = sum / static_cast<double>(n);
  return out;
}

void write_pair_samples(const Corpus& corpus, std::span<const PairSample> samples,
                        std::ostream& out) {
  csv::write_row(out, {"student_a", "text_a", "student_b", "text_b", "months_a",
                       "months_b", "similarity"});
  for (const auto& p : samples) {
    csv::write_row(out, {corpus.students[p.a.student].student_id,
                         std::to_string(p.a.text),
                         corpus.students[p.b.student].student_id,
                         std::to_string(p.b.text), csv::format(p.months_a),
                         csv::format(p.months_b), csv::format(p.similarity)});
  }
}

std::vector<PairSample> read_pair_samples(const Corpus& corpus, std::istream& in) {
  csv::Reader reader(in, {"student_a", "text_a", "student_b", "text_b",
                          "months_a", "months_b", "similarity"});
  std::unordered_map<std::string, uint32_t> index;
  for (uint32_t i = 0; i < corpus.students.size(); ++i) {
    index.emplace(corpus.students[i].student_id, i);
  }
  const auto resolve = [&](const std::string& id, const std::string& text) {
    const auto it = index.find(id);
    const auto t = csv::parse_int(text);
    if (it == index.end() || t < 0 ||
        static_cast<size_t>(t) >= corpus.students[it->second].texts.size()) {
      throw DataError("sample file line " + std::to_string(reader.line_number()) +
                      ": unknown text " + id + "/" + text);
    }
    return TextRef{it->second, static_cast<uint32_t>(t)};
  };
  std::vector<PairSample> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    out.push_back({resolve(row[0], row[1]), resolve(row[2], row[3]),
                   csv::parse_double(row[4]), csv::parse_double(row[5]),
                   csv::parse_double(row[6])});
  }
  return out;
}

size_t HeatMap::slot(size_t i, size_t j) {
  if (i > j) std::swap(i, j);
  if (j >= kHeatmapMonths) throw UsageError("heat map month out of range");
  return i * kHeatmapMonths + j;
}

void HeatMap::add(double months_a, double months_b, double similarity) {
  const size_t i = month_bin(months_a);
  const size_t j = month_bin(months_b);
  if (i >= kHeatmapMonths || j >= kHeatmapMonths) return;
  Cell& c = cells_[slot(i, j)];
  ++c.count;
  c.sum += similarity;
  c.sum_sq += similarity * similarity;
}

std::optional<double> HeatMap::mean(size_t i, size_t j) const {
  const Cell& c = cell(i, j);
  if (c.count == 0) return std::nullopt;
  return c.sum / static_cast<double>(c.count);
}

const HeatMap::Cell& HeatMap::cell(size_t i, size_t j) const {
  return cells_[slot(i, j)];
}

double HeatMap::global_mean() const {
  double sum = 0.0;
  size_t count = 0;
  for (const auto& c : cells_) {
    sum += c.sum;
    count += c.count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

size_t HeatMap::total_count() const {
  size_t count = 0;
  for (const auto& c : cells_) count += c.count;
  return count;
}

HeatMap build_heatmap(std::span<const PairSample> samples) {
  if (samples.empty()) throw DataError("heat map needs at least one sample");
  HeatMap map;
  for (const auto& s : samples) map.add(s.months_a, s.months_b, s.similarity);
  return map;
}

Flatness heatmap_flatness(const HeatMap& map, size_t min_count, double z_limit) {
  Flatness out;
  const double mu = map.global_mean();
  for (size_t i = 0; i < kHeatmapMonths; ++i) {
    for (size_t j = i; j < kHeatmapMonths; ++j) {
      const auto& c = map.cell(i, j);
      if (c.count < std::max<size_t>(min_count, 2)) continue;
      const auto n = static_cast<double>(c.count);
      const double mean = c.sum / n;
      const double var = std::max(0.0, (c.sum_sq - n * mean * mean) / (n - 1.0));
      const double se = std::sqrt(var / n);
      const double z = se > 0.0 ? std::abs(mean - mu) / se
                                : (mean == mu ? 0.0 : INFINITY);
      ++out.cells_checked;
      if (z > z_limit) ++out.cells_over;
      out.max_z = std::max(out.max_z, z);
    }
  }
  return out;
}

void write_heatmap(const HeatMap& map, std::ostream& out) {
  csv::write_row(out, {"month_a", "month_b", "mean_sim", "count"});
  for (size_t i = 0; i < kHeatmapMonths; ++i) {
    for (size_t j = i; j < kHeatmapMonths; ++j) {
      const auto m = map.mean(i, j);
      if (!m) continue;
      csv::write_row(out, {std::to_string(i), std::to_string(j), csv::format(*m),
                           std::to_string(map.cell(i, j).count)});
    }
  }
}

std::string heatmap_svg(const HeatMap& map) {
  svg::HeatGrid grid;
  grid.title = "Mean cross-author similarity";
  grid.x_label = "Months in school, author A";
  grid.y_label = "Months in school, author B";
  grid.rows = grid.cols = kHeatmapMonths;
  for (size_t r = 0; r < kHeatmapMonths; ++r) {
    for (size_t c = 0; c < kHeatmapMonths; ++c) grid.cells.push_back(map.mean(c, r));
  }
  return svg::heatmap(grid);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("percentile rank must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double rank = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double f = rank - static_cast<double>(lo);
  return values[lo] + f * (values[hi] - values[lo]);
}

std::vector<ClusterReport> cluster_report(
    const ClusterModel& model, const std::vector<ApproxProfile>& profiles,
    std::span<const TextIndicators> texts, double step, double horizon) {
  std::unordered_map<std::string, const ApproxProfile*> by_id;
  for (const auto& p : profiles) by_id.emplace(p.student_id, &p);
  const size_t n_grid = grid_points_within(horizon, step);

  std::vector<std::vector<const ApproxProfile*>> members(model.k());
  for (size_t i = 0; i < model.student_ids.size(); ++i) {
    const auto it = by_id.find(model.student_ids[i]);
    if (it == by_id.end()) {
      throw DataError("no profile for clustered student " + model.student_ids[i]);
    }
    members.at(model.assignments[i]).push_back(it->second);
  }

  std::vector<ClusterReport> reports;
  for (size_t r = 0; r < model.k(); ++r) {
    ClusterReport rep;
    rep.cluster = r;
    rep.n_members = members[r].size();
    const Centroid& c = model.centroids[r];
    rep.centroid.assign(c.begin(), c.begin() + std::min(c.size(), n_grid));
    for (size_t g = 0; g < n_grid; ++g) {
      std::vector<double> values;
      for (const auto* p : members[r]) {
        if (p->values.size() > g) values.push_back(p->values[g]);
      }
      if (values.empty()) break;
      rep.band.push_back({g, percentile(values, 0.05), percentile(values, 0.95),
                          values.size()});
    }
    std::map<std::string, double> reach;
    for (const auto* p : members[r]) {
      const double last = static_cast<double>(p->values.size() - 1) * step;
      reach.emplace(p->student_id, std::min(last, horizon));
    }
    std::vector<TextIndicators> own;
    for (const auto& t : texts) {
      if (reach.count(t.student_id)) own.push_back(t);
    }
    rep.indicators = quality_curve(own, reach, step, n_grid);
    reports.push_back(std::move(rep));
  }
  return reports;
}

void write_cluster_report(const std::vector<ClusterReport>& reports, double step,
                          const std::filesystem::path& dir) {
  for (const auto& rep : reports) {
    const auto sub = dir / std::to_string(rep.cluster);
    std::filesystem::create_directories(sub);
    {
      auto out = open_out(sub / "centroid.csv");
      csv::write_row(out, {"grid_index", "tau_months", "value"});
      for (size_t g = 0; g < rep.centroid.size(); ++g) {
        csv::write_row(out, {std::to_string(g),
                             csv::format(static_cast<double>(g) * step),
                             csv::format(rep.centroid[g])});
      }
    }
    {
      auto out = open_out(sub / "band.csv");
      csv::write_row(out, {"grid_index", "tau_months", "p5", "p95", "n_members"});
      for (const auto& b : rep.band) {
        csv::write_row(out, {std::to_string(b.grid_index),
                             csv::format(static_cast<double>(b.grid_index) * step),
                             csv::format(b.p5), csv::format(b.p95),
                             std::to_string(b.n_members)});
      }
    }
    {
      auto out = open_out(sub / "indicators.csv");
      csv::write_row(out, {"grid_index", "tau_months", "smog", "nouns_per_sentence",
                           "verbs_per_sentence", "word_count", "avg_word_len",
                           "n_texts"});
      for (const auto& p : rep.indicators) {
        csv::write_row(out, {std::to_string(p.grid_index),
                             csv::format(static_cast<double>(p.grid_index) * step),
                             csv::format(p.mean.smog),
                             csv::format(p.mean.nouns_per_sentence),
                             csv::format(p.mean.verbs_per_sentence),
                             csv::format(p.mean.word_count),
                             csv::format(p.mean.avg_word_length),
                             std::to_string(p.n_texts)});
      }
    }

    const std::string title = "Cluster " + std::to_string(rep.cluster) + " (" +
                              std::to_string(rep.n_members) + " students)";
    const auto tau = [step](size_t g) { return static_cast<double>(g) * step; };
    svg::LineChart profile{title, "Months", "Similarity to initial style", {}, {}};
    svg::Series centroid{"centroid", {}, {}};
    for (size_t g = 0; g < rep.centroid.size(); ++g) {
      centroid.x.push_back(tau(g));
      centroid.y.push_back(rep.centroid[g]);
    }
    profile.series.push_back(std::move(centroid));
    svg::Band band;
    for (const auto& b : rep.band) {
      band.x.push_back(tau(b.grid_index));
      band.lo.push_back(b.p5);
      band.hi.push_back(b.p95);
    }
    profile.band = std::move(band);

    svg::LineChart smog_chart{"SMOG grade", "Months", "SMOG", {}, {}};
    svg::LineChart phrase_chart{"Phrases per sentence", "Months", "Per sentence", {}, {}};
    svg::LineChart words_chart{"Words per text", "Months", "Words", {}, {}};
    svg::Series smog_s{"", {}, {}}, noun_s{"nouns", {}, {}},
        verb_s{"verbs", {}, {}, "#d62728", true}, word_s{"", {}, {}};
    for (const auto& p : rep.indicators) {
      const double x = tau(p.grid_index);
      for (auto* s : {&smog_s, &noun_s, &verb_s, &word_s}) s->x.push_back(x);
      smog_s.y.push_back(p.mean.smog);
      noun_s.y.push_back(p.mean.nouns_per_sentence);
      verb_s.y.push_back(p.mean.verbs_per_sentence);
      word_s.y.push_back(p.mean.word_count);
    }
    smog_chart.series.push_back(std::move(smog_s));
    phrase_chart.series.push_back(std::move(noun_s));
    phrase_chart.series.push_back(std::move(verb_s));
    words_chart.series.push_back(std::move(word_s));

    constexpr double kPanel = 320.0;
    svg::Document doc(640, 4 * kPanel);
    svg::draw_line_chart(doc, {0, 0, 640, kPanel}, profile);
    svg::draw_line_chart(doc, {0, kPanel, 640, kPanel}, smog_chart);
    svg::draw_line_chart(doc, {0, 2 * kPanel, 640, kPanel}, phrase_chart);
    svg::draw_line_chart(doc, {0, 3 * kPanel, 640, kPanel}, words_chart);
    write_file(sub / "plot.svg", doc.str());
  }
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  for (const auto& s : corpus.students) {
    ++stats.texts_per_student[s.texts.size()];
    if (s.texts.empty()) continue;
    const Timestamp origin = first_hand_in(s);
    for (const auto& t : s.texts) {
      ++stats.hand_ins_per_month[month_bin(months_between(origin, t.submitted_at))];
    }
  }
  return stats;
}

void write_corpus_stats(const CorpusStats& stats, std::ostream& out) {
  csv::write_row(out, {"histogram", "bin", "count"});
  for (const auto& [bin, count] : stats.texts_per_student) {
    csv::write_row(out, {"texts_per_student", std::to_string(bin), std::to_string(count)});
  }
  for (const auto& [bin, count] : stats.hand_ins_per_month) {
    csv::write_row(out, {"hand_ins_per_month", std::to_string(bin), std::to_string(count)});
  }
}

CorpusStats read_corpus_stats(std::istream& in) {
  csv::Reader reader(in, {"histogram", "bin", "count"});
  CorpusStats stats;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const auto bin = static_cast<size_t>(csv::parse_int(row[1]));
    const auto count = static_cast<size_t>(csv::parse_int(row[2]));
    if (row[0] == "texts_per_student") {
      stats.texts_per_student[bin] = count;
    } else if (row[0] == "hand_ins_per_month") {
      stats.hand_ins_per_month[bin] = count;
    } else {
      throw DataError("corpus stats line " + std::to_string(reader.line_number()) +
                      ": unknown histogram '" + row[0] + "'");
    }
  }
  return stats;
}

std::string corpus_stats_svg(const CorpusStats& stats) {
  const auto to_chart = [](const std::map<size_t, size_t>& hist, std::string title,
                           std::string x_label, size_t label_offset) {
    svg::BarChart chart{std::move(title), std::move(x_label), "Count", {}, {}};
    if (hist.empty()) return chart;
    for (size_t b = hist.begin()->first; b <= hist.rbegin()->first; ++b) {
      const auto it = hist.find(b);
      chart.labels.push_back(std::to_string(b + label_offset));
      chart.values.push_back(it == hist.end() ? 0.0 : static_cast<double>(it->second));
    }
    return chart;
  };
  svg::Document doc(640, 800);
  svg::draw_bar_chart(doc, {0, 0, 640, 400},
                      to_chart(stats.texts_per_student, "Students by number of texts",
                               "Texts per student", 0));
  svg::draw_bar_chart(doc, {0, 400, 640, 400},
                      to_chart(stats.hand_ins_per_month, "Hand-ins by month in school",
                               "Month", 1));
  return doc.str();
}

}  // namespace stylo
