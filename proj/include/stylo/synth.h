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

// Synthetic corpora with planted writing-style drift, used to exercise the
// pipeline without access to real student essays.

#ifndef STYLO_SYNTH_H_
#define STYLO_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stylo/corpus.h"
#include "stylo/timestamp.h"

namespace stylo::synth {

// a-z followed by æ, ø, å.
inline constexpr size_t kAlphabetSize = 29;
char32_t alphabet_char(size_t index);

struct StyleParams {
  // Word-initial letter weights, normalized.
  std::vector<double> unigram;
  // Row-major kAlphabetSize x kAlphabetSize letter transition probabilities;
  // every row sums to 1.
  std::vector<double> bigram;
  double mean_sentence_words = 12.0;
  double mean_word_length = 5.0;
  // Fraction of words forced to carry at least three vowel groups.
  double polysyllable_rate = 0.1;
};

// Linear interpolation (1 - w) * a + w * b; keeps rows normalized.
StyleParams blend(const StyleParams& a, const StyleParams& b, double w);

// Euclidean distance over all distribution entries and scalar fields.
double style_distance(const StyleParams& a, const StyleParams& b);

enum class Archetype {
  kSuddenDrop,
  kSteadyDecline,
  kRevertAfterBreak,
  kSlowDecline,
  kStable,
};

inline constexpr Archetype kAllArchetypes[] = {
    Archetype::kSuddenDrop, Archetype::kSteadyDecline,
    Archetype::kRevertAfterBreak, Archetype::kSlowDecline, Archetype::kStable};

std::string_view archetype_name(Archetype a);
// Throws UsageError for unknown names.
Archetype parse_archetype(std::string_view name);

// Blend weight toward the target style after `months` of a `horizon`-month
// stay. weight(0) == 0; monotone except for kRevertAfterBreak.
double drift_weight(Archetype a, double months, double horizon);

struct PlantedLabel {
  std::string student_id;
  Archetype archetype;

  friend bool operator==(const PlantedLabel&, const PlantedLabel&) = default;
};

struct SynthOptions {
  double months = 30.0;
  size_t min_texts = 6;
  size_t max_texts = 20;
  // Raw body length range in characters, before cleaning strips a prefix.
  size_t min_chars = 800;
  size_t max_chars = 1400;
  // Per-month relative growth of the text length target.
  double length_growth_per_month = 0.0;
  // Log-normal spread of the shared letter transitions; larger values give
  // peakier rows and lower-entropy text.
  double language_spread = 4.0;
  // Log-normal spread of each author's letter transitions around the shared
  // language; 0 makes every author share one style.
  double author_spread = 2.0;
  // Log-normal spread of the drift target around the initial style.
  double drift_spread = 6.0;
  // Probability of a capitalized mid-sentence word (a stand-in name).
  double name_rate = 0.01;
  std::string id_prefix = "s";
  Timestamp start = Timestamp{std::chrono::sys_days{
      std::chrono::year{2020} / std::chrono::August / 10}};
};

// Everything the generator decided for one student before rendering text.
struct StudentPlan {
  std::string student_id;
  Archetype archetype;
  StyleParams initial;
  StyleParams target;
  // Months since the student's first possible hand-in, ascending.
  std::vector<double> hand_in_months;
  uint64_t seed = 0;

  StyleParams style_at(double months, double horizon) const {
    return blend(initial, target, drift_weight(archetype, months, horizon));
  }
};

// Months without hand-ins (summer breaks): [12, 13.5) and [24, 25.5).
bool in_vacation(double months);

// archetype_mix is keyed by archetype; weights must be non-negative and not
// all zero (UsageError otherwise).
std::vector<StudentPlan> plan_students(
    size_t n_students, const std::map<Archetype, double>& archetype_mix,
    uint64_t seed, const SynthOptions& options = {});

// Renders one essay body in the given style.
std::string render_text(const StyleParams& style, size_t target_chars,
                        double name_rate, uint64_t seed);

struct SynthCorpus {
  Corpus corpus;
  std::vector<PlantedLabel> labels;
};

SynthCorpus render_corpus(const std::vector<StudentPlan>& plans,
                          const SynthOptions& options = {});

SynthCorpus gen_corpus(size_t n_students,
                       const std::map<Archetype, double>& archetype_mix,
                       uint64_t seed, const SynthOptions& options = {});

// CSV "student_id,archetype".
void write_labels(const std::vector<PlantedLabel>& labels, std::ostream& out);
std::vector<PlantedLabel> read_labels(std::istream& in);

}  // namespace stylo::synth

#endif  // STYLO_SYNTH_H_
