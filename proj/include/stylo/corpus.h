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

// The corpus model and every transformation applied to it before any
// similarity is computed.

#ifndef STYLO_CORPUS_H_
#define STYLO_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylo/timestamp.h"

namespace stylo {

struct Text {
  std::string student_id;
  Timestamp submitted_at;
  std::string body;

  friend bool operator==(const Text&, const Text&) = default;
};

using RawText = Text;

struct CleanText {
  Text text;
  // Code points in the cleaned body.
  size_t char_len = 0;
};

// Texts are kept in ascending submission order; equal timestamps keep their
// ingestion order.
struct StudentRecord {
  std::string student_id;
  std::vector<Text> texts;

  friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

// Students are kept sorted by id, ids are unique.
struct Corpus {
  std::vector<StudentRecord> students;

  size_t num_texts() const;
  const StudentRecord* find(std::string_view student_id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Groups texts by student, sorts students by id and texts by time.
Corpus make_corpus(std::vector<Text> texts);

struct IngestResult {
  Corpus corpus;
  // Exact (student_id, submitted_at, body) repeats that were dropped.
  size_t duplicates = 0;
};

// Reads one JSON object per line with keys student_id, submitted_at
// (ISO-8601) and body. Blank lines are skipped. Throws DataError naming the
// 1-based line number of the first malformed record.
IngestResult ingest(std::istream& in);
IngestResult ingest(const std::filesystem::path& path);

// Writes the same line-delimited format; ingest(serialize(c)) == c.
void serialize(const Corpus& corpus, std::ostream& out);
void serialize(const Corpus& corpus, const std::filesystem::path& path);

struct CleaningConfig {
  size_t strip_prefix = 200;
  // Accepted bodies satisfy min_exclusive < length < max_exclusive.
  size_t min_exclusive = 400;
  size_t max_exclusive = 30000;
  bool pseudonymize = true;
  std::string placeholder = "⟨NAME⟩";
};

struct CleaningReport {
  size_t accepted = 0;
  size_t rejected_short = 0;
  size_t rejected_long = 0;
  size_t students_dropped = 0;
};

// Replaces every capitalized, non-sentence-initial word with the
// placeholder. Leading and trailing punctuation around the word is kept.
std::string pseudonymize(std::string_view body, std::string_view placeholder);

// Strips the prefix, pseudonymizes, then applies the length window to the
// resulting body. Returns nullopt for rejected texts.
std::optional<CleanText> clean(const RawText& raw, const CleaningConfig& cfg);

// Applies clean() to every text; students left without texts disappear.
Corpus clean_corpus(const Corpus& corpus, const CleaningConfig& cfg,
                    CleaningReport* report = nullptr);

Corpus drop_sparse_students(Corpus corpus, size_t min_texts = 5);

enum class Split { kTrain, kVal, kAnalyze };

std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view name);

struct SplitSpec {
  double train = 0.54;
  double val = 0.10;
  double analyze = 0.36;
  uint64_t seed = 0;

  // Throws UsageError unless all ratios are positive and sum to 1.
  void validate() const;
};

struct CorpusSplit {
  Corpus train;
  Corpus val;
  Corpus analyze;
};

// Students are ranked by a hash of (student_id, seed); the first
// round(train * n) go to train, the next round(val * n) to val and the rest
// to analyze, with every split non-empty. Throws DataError for fewer than 3
// students.
CorpusSplit split_authors(const Corpus& corpus, const SplitSpec& spec);

// student_id -> split, written as CSV "student_id,split".
using SplitManifest = std::map<std::string, Split>;

SplitManifest manifest_of(const CorpusSplit& split);
CorpusSplit apply_manifest(const Corpus& corpus, const SplitManifest& manifest);
void write_manifest(const SplitManifest& manifest, std::ostream& out);
SplitManifest read_manifest(std::istream& in);

// Index of a text inside a Corpus.
struct TextRef {
  uint32_t student = 0;
  uint32_t text = 0;

  friend auto operator<=>(const TextRef&, const TextRef&) = default;
};

struct SimInstance {
  TextRef a;
  TextRef b;
  // 1 for same author, 0 for different authors.
  int label = 0;

  friend bool operator==(const SimInstance&, const SimInstance&) = default;
};

inline const Text& text_at(const Corpus& corpus, TextRef ref) {
  return corpus.students[ref.student].texts[ref.text];
}

// All unordered same-author pairs plus an equal number of distinct
// cross-author pairs sampled uniformly, shuffled by seed. Throws DataError
// for fewer than 2 students or when negatives cannot be found within
// 100 x target draws.
std::vector<SimInstance> gen_sim_instances(const Corpus& corpus, uint64_t seed);

// CSV "student_a,text_a,student_b,text_b,label" with text indices into each
// student's sorted text list.
void write_sim_instances(const Corpus& corpus,
                         const std::vector<SimInstance>& pairs,
                         std::ostream& out);
std::vector<SimInstance> read_sim_instances(const Corpus& corpus,
                                            std::istream& in);

}  // namespace stylo

#endif  // STYLO_CORPUS_H_
