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

#include "stylo/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "stylo/csv.h"
#include "stylo/error.h"
#include "stylo/rng.h"
#include "stylo/utf8.h"

namespace stylo {

size_t Corpus::num_texts() const {
  size_t n = 0;
  for (const auto& s : students) n += s.texts.size();
  return n;
}

const StudentRecord* Corpus::find(std::string_view student_id) const {
  const auto it = std::lower_bound(
      students.begin(), students.end(), student_id,
      [](const StudentRecord& s, std::string_view id) {
        return s.student_id < id;
      });
  if (it == students.end() || it->student_id != student_id) return nullptr;
  return &*it;
}

Corpus make_corpus(std::vector<Text> texts) {
  std::map<std::string, std::vector<Text>> by_student;
  for (auto& t : texts) by_student[t.student_id].push_back(std::move(t));
  Corpus corpus;
  corpus.students.reserve(by_student.size());
  for (auto& [id, list] : by_student) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Text& a, const Text& b) {
                       return a.submitted_at < b.submitted_at;
                     });
    corpus.students.push_back({id, std::move(list)});
  }
  return corpus;
}

IngestResult ingest(std::istream& in) {
  std::vector<Text> texts;
  std::set<std::tuple<std::string, Timestamp::rep, std::string>> seen;
  IngestResult result;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fail = [&](const std::string& why) {
      throw DataError("line " + std::to_string(line_no) + ": " + why);
    };
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) fail("record is not a JSON object");
    for (const char* key : {"student_id", "submitted_at", "body"}) {
      if (!rec.contains(key)) fail(std::string("missing '") + key + "'");
      if (!rec[key].is_string()) fail(std::string("'") + key + "' is not a string");
    }
    Text t;
    t.student_id = rec["student_id"].get<std::string>();
    if (t.student_id.empty()) fail("empty student_id");
    const auto when = parse_timestamp(rec["submitted_at"].get<std::string>());
    if (!when) fail("unparseable submitted_at");
    t.submitted_at = *when;
    t.body = rec["body"].get<std::string>();
    if (t.body.empty()) fail("empty body");
    if (!seen.emplace(t.student_id, t.submitted_at.time_since_epoch().count(),
                      t.body)
             .second) {
      ++result.duplicates;
      continue;
    }
    texts.push_back(std::move(t));
  }
  result.corpus = make_corpus(std::move(texts));
  return result;
}

IngestResult ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return ingest(in);
}

void serialize(const Corpus& corpus, std::ostream& out) {
  for (const auto& student : corpus.students) {
    for (const auto& t : student.texts) {
      nlohmann::ordered_json rec;
      rec["student_id"] = t.student_id;
      rec["submitted_at"] = format_timestamp(t.submitted_at);
      rec["body"] = t.body;
      out << rec.dump() << '\n';
    }
  }
}

void serialize(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  serialize(corpus, out);
}

std::string pseudonymize(std::string_view body, std::string_view placeholder) {
  const std::u32string text = utf8::decode(body);
  std::string out;
  out.reserve(body.size());
  bool sentence_start = true;
  size_t i = 0;
  while (i < text.size()) {
    if (utf8::is_space(text[i])) {
      if (text[i] == U'\n') sentence_start = true;
      utf8::append(out, text[i]);
      ++i;
      continue;
    }
    size_t end = i;
    while (end < text.size() && !utf8::is_space(text[end])) ++end;
    // token = lead punctuation, word core, tail.
    size_t core = i;
    while (core < end && !utf8::is_letter(text[core])) ++core;
    size_t core_end = core;
    while (core_end < end && utf8::is_letter(text[core_end])) ++core_end;
    const bool capitalized = core < end && utf8::is_upper(text[core]);
    if (capitalized && !sentence_start) {
      out += utf8::encode(std::u32string_view(text).substr(i, core - i));
      out += placeholder;
      out += utf8::encode(
          std::u32string_view(text).substr(core_end, end - core_end));
    } else {
      out += utf8::encode(std::u32string_view(text).substr(i, end - i));
    }
    // A token ending in terminal punctuation (possibly followed by closing
    // quotes or brackets) opens a new sentence.
    size_t last = end;
    while (last > i && (text[last - 1] == U'"' || text[last - 1] == U')' ||
                        text[last - 1] == U'\'' || text[last - 1] == 0xBB)) {
      --last;
    }
    const char32_t terminal = last > i ? text[last - 1] : U' ';
    sentence_start = terminal == U'.' || terminal == U'!' || terminal == U'?' ||
                     terminal == U':';
    i = end;
  }
  return out;
}

std::optional<CleanText> clean(const RawText& raw, const CleaningConfig& cfg) {
  std::string body = utf8::drop_prefix(raw.body, cfg.strip_prefix);
  if (cfg.pseudonymize) body = pseudonymize(body, cfg.placeholder);
  const size_t len = utf8::length(body);
  if (len <= cfg.min_exclusive || len >= cfg.max_exclusive) return std::nullopt;
  return CleanText{{raw.student_id, raw.submitted_at, std::move(body)}, len};
}

Corpus clean_corpus(const Corpus& corpus, const CleaningConfig& cfg,
                    CleaningReport* report) {
  CleaningReport local;
  Corpus out;
  for (const auto& student : corpus.students) {
    StudentRecord rec{student.student_id, {}};
    for (const auto& t : student.texts) {
      auto cleaned = clean(t, cfg);
      if (cleaned) {
        ++local.accepted;
        rec.texts.push_back(std::move(cleaned->text));
      } else {
        const size_t len =
            utf8::length(utf8::drop_prefix(t.body, cfg.strip_prefix));
        // Pseudonymization can move a borderline text across a threshold;
        // classify by the side of the window it fell out of.
        if (len * 2 < cfg.min_exclusive + cfg.max_exclusive) {
          ++local.rejected_short;
        } else {
          ++local.rejected_long;
        }
      }
    }
    if (!rec.texts.empty()) out.students.push_back(std::move(rec));
  }
  if (report) *report = local;
  return out;
}

Corpus drop_sparse_students(Corpus corpus, size_t min_texts) {
  std::erase_if(corpus.students, [min_texts](const StudentRecord& s) {
    return s.texts.size() < min_texts;
  });
  return corpus;
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kAnalyze:
      return "analyze";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "analyze") return Split::kAnalyze;
  return std::nullopt;
}

void SplitSpec::validate() const {
  if (!(train > 0.0) || !(val > 0.0) || !(analyze > 0.0)) {
    throw UsageError("split ratios must be positive");
  }
  if (std::abs(train + val + analyze - 1.0) > 1e-6) {
    throw UsageError("split ratios must sum to 1");
  }
}

CorpusSplit split_authors(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  const size_t n = corpus.students.size();
  if (n < 3) {
    throw DataError("need at least 3 students to split, got " +
                    std::to_string(n));
  }
  std::vector<std::pair<uint64_t, size_t>> ranked;
  ranked.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    ranked.emplace_back(derive_seed(spec.seed, corpus.students[i].student_id),
                        i);
  }
  std::sort(ranked.begin(), ranked.end());
  const auto count = [n](double ratio) {
    return std::clamp<size_t>(static_cast<size_t>(std::llround(ratio * n)), 1,
                              n);
  };
  size_t n_train = std::min(count(spec.train), n - 2);
  size_t n_val = std::min(count(spec.val), n - n_train - 1);

  std::vector<Split> assigned(n, Split::kAnalyze);
  for (size_t r = 0; r < n; ++r) {
    const size_t idx = ranked[r].second;
    if (r < n_train) {
      assigned[idx] = Split::kTrain;
    } else if (r < n_train + n_val) {
      assigned[idx] = Split::kVal;
    }
  }
  CorpusSplit out;
  for (size_t i = 0; i < n; ++i) {
    const auto& s = corpus.students[i];
    switch (assigned[i]) {
      case Split::kTrain:
        out.train.students.push_back(s);
        break;
      case Split::kVal:
        out.val.students.push_back(s);
        break;
      case Split::kAnalyze:
        out.analyze.students.push_back(s);
        break;
    }
  }
  return out;
}

SplitManifest manifest_of(const CorpusSplit& split) {
  SplitManifest m;
  for (const auto& s : split.train.students) m[s.student_id] = Split::kTrain;
  for (const auto& s : split.val.students) m[s.student_id] = Split::kVal;
  for (const auto& s : split.analyze.students) m[s.student_id] = Split::kAnalyze;
  return m;
}

CorpusSplit apply_manifest(const Corpus& corpus, const SplitManifest& manifest) {
  CorpusSplit out;
  for (const auto& s : corpus.students) {
    const auto it = manifest.find(s.student_id);
    if (it == manifest.end()) {
      throw DataError("student '" + s.student_id + "' missing from manifest");
    }
    switch (it->second) {
      case Split::kTrain:
        out.train.students.push_back(s);
        break;
      case Split::kVal:
        out.val.students.push_back(s);
        break;
      case Split::kAnalyze:
        out.analyze.students.push_back(s);
        break;
    }
  }
  return out;
}

void write_manifest(const SplitManifest& manifest, std::ostream& out) {
  csv::write_row(out, {"student_id", "split"});
  for (const auto& [id, split] : manifest) {
    csv::write_row(out, {id, std::string(split_name(split))});
  }
}

SplitManifest read_manifest(std::istream& in) {
  csv::Reader reader(in, {"student_id", "split"});
  SplitManifest m;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const auto split = parse_split(row[1]);
    if (!split) {
      throw DataError("manifest line " + std::to_string(reader.line_number()) +
                      ": unknown split '" + row[1] + "'");
    }
    if (!m.emplace(row[0], *split).second) {
      throw DataError("manifest lists '" + row[0] + "' twice");
    }
  }
  return m;
}

std::vector<SimInstance> gen_sim_instances(const Corpus& corpus, uint64_t seed) {
  const size_t n_students = corpus.students.size();
  if (n_students < 2) {
    throw DataError("need at least 2 students to sample negative pairs");
  }
  std::vector<SimInstance> out;
  for (uint32_t s = 0; s < n_students; ++s) {
    const auto n = static_cast<uint32_t>(corpus.students[s].texts.size());
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j = i + 1; j < n; ++j) out.push_back({{s, i}, {s, j}, 1});
    }
  }
  const size_t target = out.size();
  Rng rng(derive_seed(seed, "sim-negatives"));
  std::set<std::pair<TextRef, TextRef>> used;
  const size_t max_draws = 100 * target;
  size_t draws = 0;
  while (used.size() < target) {
    if (draws++ >= max_draws) {
      throw DataError("could not sample " + std::to_string(target) +
                      " distinct negative pairs within " +
                      std::to_string(max_draws) + " draws");
    }
    const auto s1 = static_cast<uint32_t>(rng.index(n_students));
    auto s2 = static_cast<uint32_t>(rng.index(n_students - 1));
    if (s2 >= s1) ++s2;
    const TextRef a{s1, static_cast<uint32_t>(
                            rng.index(corpus.students[s1].texts.size()))};
    const TextRef b{s2, static_cast<uint32_t>(
                            rng.index(corpus.students[s2].texts.size()))};
    if (used.insert(std::minmax(a, b)).second) out.push_back({a, b, 0});
  }
  Rng shuffler(derive_seed(seed, "sim-shuffle"));
  shuffler.shuffle(std::span<SimInstance>(out));
  return out;
}

void write_sim_instances(const Corpus& corpus,
                         const std::vector<SimInstance>& pairs,
                         std::ostream& out) {
  csv::write_row(out, {"student_a", "text_a", "student_b", "text_b", "label"});
  for (const auto& p : pairs) {
    csv::write_row(out, {corpus.students[p.a.student].student_id,
                         std::to_string(p.a.text),
                         corpus.students[p.b.student].student_id,
                         std::to_string(p.b.text), std::to_string(p.label)});
  }
}

std::vector<SimInstance> read_sim_instances(const Corpus& corpus,
                                            std::istream& in) {
  csv::Reader reader(in, {"student_a", "text_a", "student_b", "text_b", "label"});
  std::unordered_map<std::string, uint32_t> index;
  for (uint32_t i = 0; i < corpus.students.size(); ++i) {
    index.emplace(corpus.students[i].student_id, i);
  }
  const auto resolve = [&](const std::string& id, const std::string& text) {
    const auto it = index.find(id);
    if (it == index.end()) {
      throw DataError("pair file line " + std::to_string(reader.line_number()) +
                      ": unknown student '" + id + "'");
    }
    const auto t = csv::parse_int(text);
    if (t < 0 || static_cast<size_t>(t) >= corpus.students[it->second].texts.size()) {
      throw DataError("pair file line " + std::to_string(reader.line_number()) +
                      ": text index out of range");
    }
    return TextRef{it->second, static_cast<uint32_t>(t)};
  };
  std::vector<SimInstance> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    SimInstance p{resolve(row[0], row[1]), resolve(row[2], row[3]),
                  static_cast<int>(csv::parse_int(row[4]))};
    if (p.label != 0 && p.label != 1) {
      throw DataError("pair file line " + std::to_string(reader.line_number()) +
                      ": label must be 0 or 1");
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace stylo
