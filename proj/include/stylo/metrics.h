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

// Per-text writing-quality indicators built on sentence and word
// segmentation, plus their averages over a time grid.

#ifndef STYLO_METRICS_H_
#define STYLO_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylo {

// Lowercase tokens, including the trailing period, that do not end a
// sentence.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::set<std::string> entries)
      : entries_(std::move(entries)) {}

  // One entry per line; '#' starts a comment line.
  static AbbreviationList parse(std::string_view text);
  // The compiled-in Danish list.
  static const AbbreviationList& danish();

  bool contains(std::string_view lowercase_token) const {
    return entries_.count(std::string(lowercase_token)) > 0;
  }

 private:
  std::set<std::string> entries_;
};

// Splits after '.', '!' or '?' followed by whitespace or the end of the
// text, unless the token ending in '.' is a listed abbreviation. Sentences
// are trimmed and empty ones dropped.
std::vector<std::string> split_sentences(
    std::string_view body,
    const AbbreviationList& abbreviations = AbbreviationList::danish());

// Whitespace tokens with leading and trailing non-letters stripped; tokens
// without letters are dropped.
std::vector<std::string> split_words(std::string_view text);

// Maximal runs of a, e, i, o, u, y, æ, ø, å (any case); at least 1 for a
// non-empty word.
size_t count_syllables(std::string_view word);

enum class Tag { kNoun, kMainVerb, kOther };

class Tagger {
 public:
  virtual ~Tagger() = default;
  // Tags words[i] of one sentence; must be defined for every index.
  virtual Tag tag(std::span<const std::string> words, size_t i) const = 0;
};

// Suffix and context rules for Danish: closed-class words are "other",
// words after "at" or a modal/auxiliary are main verbs, common noun
// derivational suffixes and words after a determiner are nouns, and the
// pseudonymization placeholder counts as a noun.
class HeuristicDanishTagger : public Tagger {
 public:
  Tag tag(std::span<const std::string> words, size_t i) const override;
};

struct TextStats {
  size_t n_sentences = 0;
  size_t n_words = 0;
  size_t n_polysyllables = 0;
  size_t n_nouns = 0;
  size_t n_main_verbs = 0;
  size_t word_chars = 0;
};

TextStats compute_stats(std::string_view body, const Tagger& tagger,
                        const AbbreviationList& abbreviations =
                            AbbreviationList::danish());

inline constexpr double kSmogSlope = 1.0430;
inline constexpr double kSmogIntercept = 3.1291;

// 1.0430 * sqrt(30 * polysyllables / sentences) + 3.1291. Throws
// UndefinedMetricError when there are no sentences.
double smog(size_t n_polysyllables, size_t n_sentences);
inline double smog(const TextStats& s) {
  return smog(s.n_polysyllables, s.n_sentences);
}

struct PhraseRatios {
  double nouns_per_sentence = 0.0;
  double verbs_per_sentence = 0.0;
};

// Throws UndefinedMetricError for a body without sentences.
PhraseRatios phrase_ratios(std::string_view body, const Tagger& tagger);
PhraseRatios phrase_ratios(const TextStats& stats);

struct QualityIndicators {
  double smog = 0.0;
  double nouns_per_sentence = 0.0;
  double verbs_per_sentence = 0.0;
  double word_count = 0.0;
  double avg_word_length = 0.0;
};

QualityIndicators indicators(const TextStats& stats);

// Indicators for one text placed on its author's profile time axis.
struct TextIndicators {
  std::string student_id;
  double tau = 0.0;
  QualityIndicators quality;
};

struct CurvePoint {
  size_t grid_index = 0;
  QualityIndicators mean;
  size_t n_texts = 0;
};

// Mean indicators at each grid point g (time g * step) over texts with
// |tau - g * step| <= window / 2 whose author's profile reaches g * step
// (horizon[student] >= g * step). Grid points without such texts are
// omitted, leaving a gap.
std::vector<CurvePoint> quality_curve(
    std::span<const TextIndicators> texts,
    const std::map<std::string, double>& horizon, double step, size_t n_grid,
    double window = 1.0);

// CSV "student_id,tau_months,smog,nouns_per_sentence,verbs_per_sentence,
// word_count,avg_word_len".
void write_text_indicators(const std::vector<TextIndicators>& rows,
                           std::ostream& out);
std::vector<TextIndicators> read_text_indicators(std::istream& in);

// CSV "cluster,grid_index,smog,nouns_per_sentence,verbs_per_sentence,
// word_count,avg_word_len,n_texts".
void write_quality_curves(const std::vector<std::vector<CurvePoint>>& curves,
                          std::ostream& out);

}  // namespace stylo

#endif  // STYLO_METRICS_H_
