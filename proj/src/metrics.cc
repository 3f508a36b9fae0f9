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

#include "stylo/metrics.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "stylo/csv.h"
#include "stylo/error.h"
#include "stylo/utf8.h"

namespace stylo {
namespace {

#include "abbreviations.inc"

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_vowel(char32_t c) {
  switch (utf8::to_lower(c)) {
    case U'a':
    case U'e':
    case U'i':
    case U'o':
    case U'u':
    case U'y':
    case 0xE6:  // æ
    case 0xF8:  // ø
    case 0xE5:  // å
      return true;
    default:
      return false;
  }
}

std::string lowercase(std::string_view s) {
  std::u32string cps = utf8::decode(s);
  for (char32_t& c : cps) c = utf8::to_lower(c);
  return utf8::encode(cps);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const std::set<std::string>& closed_class() {
  static const std::set<std::string> words = {
      "af",     "alle",   "alt",    "at",    "bare",   "blev",   "bliver",
      "da",     "de",     "deres",  "der",   "det",    "dette",  "dem",
      "den",    "denne",  "din",    "disse", "dog",    "du",     "efter",
      "eller",  "en",     "end",    "er",    "et",     "for",    "fra",
      "gennem", "han",    "hans",   "har",   "have",   "havde",  "hele",
      "hende",  "hendes", "her",    "hun",   "hvad",   "hvem",   "hvis",
      "hvor",   "i",      "ikke",   "ind",   "ingen",  "intet",  "jeg",
      "jo",     "kan",    "kun",    "kunne", "lige",   "man",    "mange",
      "med",    "meget",  "mellem", "men",   "min",    "mod",    "må",
      "noget",  "nogen",  "nogle",  "nu",    "når",    "og",     "også",
      "om",     "op",     "os",     "over",  "på",     "selv",   "sig",
      "sin",    "skal",   "skulle", "som",   "så",     "til",    "ud",
      "uden",   "under",  "var",    "ved",   "vel",    "vi",     "vil",
      "ville",  "vores",  "være",   "været", "ham",
  };
  return words;
}

const std::set<std::string>& verb_triggers() {
  static const std::set<std::string> words = {
      "at",    "kan",    "vil",   "skal",   "må",     "bør",  "kunne",
      "ville", "skulle", "måtte", "burde",  "har",    "havde",
  };
  return words;
}

const std::set<std::string>& subjects() {
  static const std::set<std::string> words = {
      "jeg", "du", "han", "hun", "vi", "de", "man", "der", "den", "det",
  };
  return words;
}

const std::set<std::string>& determiners() {
  static const std::set<std::string> words = {
      "en",  "et",  "denne", "dette", "disse", "min",    "mit",
      "mine", "din", "dit",  "sin",   "sit",   "hans",   "hendes",
      "vores", "deres", "nogle", "mange", "flere", "alle",
  };
  return words;
}

constexpr std::string_view kNounSuffixes[] = {
    "hed",  "heder", "else",  "elser",  "ning", "ninger", "tion", "tioner",
    "sion", "sioner", "skab", "skaber", "dom",  "isme",   "itet", "ment",
    "erne",
};

constexpr std::string_view kVerbSuffixes[] = {"ede", "erede", "ende"};

}  // namespace

AbbreviationList AbbreviationList::parse(std::string_view text) {
  std::set<std::string> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    entries.insert(lowercase(line.substr(first, last - first + 1)));
  }
  return AbbreviationList(std::move(entries));
}

const AbbreviationList& AbbreviationList::danish() {
  static const AbbreviationList list = parse(kDanishAbbreviationData);
  return list;
}

std::vector<std::string> split_sentences(std::string_view body,
                                         const AbbreviationList& abbreviations) {
  const std::u32string text = utf8::decode(body);
  std::vector<std::string> out;
  const auto emit = [&](size_t from, size_t to) {
    while (from < to && utf8::is_space(text[from])) ++from;
    while (to > from && utf8::is_space(text[to - 1])) --to;
    if (to > from) out.push_back(utf8::encode(std::u32string_view(text).substr(from, to - from)));
  };
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (!is_terminal(text[i])) continue;
    const bool boundary = i + 1 == text.size() || utf8::is_space(text[i + 1]);
    if (!boundary) continue;
    if (text[i] == U'.') {
      size_t tok = i;
      while (tok > start && !utf8::is_space(text[tok - 1])) --tok;
      while (tok < i && !utf8::is_letter(text[tok])) ++tok;
      const std::string token =
          lowercase(utf8::encode(std::u32string_view(text).substr(tok, i + 1 - tok)));
      if (abbreviations.contains(token)) continue;
    }
    emit(start, i + 1);
    start = i + 1;
  }
  emit(start, text.size());
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  std::vector<std::string> words;
  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && utf8::is_space(cps[i])) ++i;
    size_t end = i;
    while (end < cps.size() && !utf8::is_space(cps[end])) ++end;
    size_t a = i, b = end;
    while (a < b && !utf8::is_letter(cps[a])) ++a;
    while (b > a && !utf8::is_letter(cps[b - 1])) --b;
    if (b > a) words.push_back(utf8::encode(std::u32string_view(cps).substr(a, b - a)));
    i = end;
  }
  return words;
}

size_t count_syllables(std::string_view word) {
  size_t groups = 0;
  bool in_group = false;
  for (char32_t c : utf8::decode(word)) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return std::max<size_t>(groups, 1);
}

Tag HeuristicDanishTagger::tag(std::span<const std::string> words,
                               size_t i) const {
  const std::string& raw = words[i];
  if (raw == "NAME") return Tag::kNoun;  // Pseudonymization placeholder.
  const std::string w = lowercase(raw);
  if (closed_class().count(w)) return Tag::kOther;
  const std::string prev = i > 0 ? lowercase(words[i - 1]) : std::string();
  if (verb_triggers().count(prev)) return Tag::kMainVerb;
  for (std::string_view suffix : kNounSuffixes) {
    if (w.size() > suffix.size() + 1 && ends_with(w, suffix)) return Tag::kNoun;
  }
  for (std::string_view suffix : kVerbSuffixes) {
    if (w.size() > suffix.size() + 1 && ends_with(w, suffix)) return Tag::kMainVerb;
  }
  if (subjects().count(prev) && w.size() > 3 && ends_with(w, "er")) {
    return Tag::kMainVerb;
  }
  if (determiners().count(prev)) return Tag::kNoun;
  return Tag::kOther;
}

TextStats compute_stats(std::string_view body, const Tagger& tagger,
                        const AbbreviationList& abbreviations) {
  TextStats stats;
  for (const std::string& sentence : split_sentences(body, abbreviations)) {
    ++stats.n_sentences;
    const std::vector<std::string> words = split_words(sentence);
    for (size_t i = 0; i < words.size(); ++i) {
      ++stats.n_words;
      stats.word_chars += utf8::length(words[i]);
      if (count_syllables(words[i]) >= 3) ++stats.n_polysyllables;
      switch (tagger.tag(words, i)) {
        case Tag::kNoun:
          ++stats.n_nouns;
          break;
        case Tag::kMainVerb:
          ++stats.n_main_verbs;
          break;
        case Tag::kOther:
          break;
      }
    }
  }
  return stats;
}

double smog(size_t n_polysyllables, size_t n_sentences) {
  if (n_sentences == 0) {
    throw UndefinedMetricError("SMOG is undefined for a text without sentences");
  }
  return kSmogSlope * std::sqrt(30.0 * static_cast<double>(n_polysyllables) /
                                static_cast<double>(n_sentences)) +
         kSmogIntercept;
}

PhraseRatios phrase_ratios(const TextStats& stats) {
  if (stats.n_sentences == 0) {
    throw UndefinedMetricError(
        "phrase ratios are undefined for a text without sentences");
  }
  const auto n = static_cast<double>(stats.n_sentences);
  return {static_cast<double>(stats.n_nouns) / n,
          static_cast<double>(stats.n_main_verbs) / n};
}

PhraseRatios phrase_ratios(std::string_view body, const Tagger& tagger) {
  return phrase_ratios(compute_stats(body, tagger));
}

QualityIndicators indicators(const TextStats& stats) {
  const PhraseRatios ratios = phrase_ratios(stats);
  QualityIndicators q;
  q.smog = smog(stats);
  q.nouns_per_sentence = ratios.nouns_per_sentence;
  q.verbs_per_sentence = ratios.verbs_per_sentence;
  q.word_count = static_cast<double>(stats.n_words);
  q.avg_word_length = stats.n_words == 0
                          ? 0.0
                          : static_cast<double>(stats.word_chars) /
                                static_cast<double>(stats.n_words);
  return q;
}

std::vector<CurvePoint> quality_curve(std::span<const TextIndicators> texts,
                                      const std::map<std::string, double>& horizon,
                                      double step, size_t n_grid, double window) {
  std::vector<CurvePoint> curve;
  const double half = 0.5 * window;
  for (size_t g = 0; g < n_grid; ++g) {
    const double t = static_cast<double>(g) * step;
    CurvePoint point;
    point.grid_index = g;
    for (const auto& text : texts) {
      if (std::abs(text.tau - t) > half) continue;
      const auto it = horizon.find(text.student_id);
      if (it == horizon.end() || it->second < t) continue;
      ++point.n_texts;
      point.mean.smog += text.quality.smog;
      point.mean.nouns_per_sentence += text.quality.nouns_per_sentence;
      point.mean.verbs_per_sentence += text.quality.verbs_per_sentence;
      point.mean.word_count += text.quality.word_count;
      point.mean.avg_word_length += text.quality.avg_word_length;
    }
    if (point.n_texts == 0) continue;
    const auto n = static_cast<double>(point.n_texts);
    point.mean.smog /= n;
    point.mean.nouns_per_sentence /= n;
    point.mean.verbs_per_sentence /= n;
    point.mean.word_count /= n;
    point.mean.avg_word_length /= n;
    curve.push_back(point);
  }
  return curve;
}

void write_text_indicators(const std::vector<TextIndicators>& rows,
                           std::ostream& out) {
  csv::write_row(out, {"student_id", "tau_months", "smog", "nouns_per_sentence",
                       "verbs_per_sentence", "word_count", "avg_word_len"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.student_id, csv::format(r.tau), csv::format(r.quality.smog),
                         csv::format(r.quality.nouns_per_sentence),
                         csv::format(r.quality.verbs_per_sentence),
                         csv::format(r.quality.word_count),
                         csv::format(r.quality.avg_word_length)});
  }
}

std::vector<TextIndicators> read_text_indicators(std::istream& in) {
  csv::Reader reader(in, {"student_id", "tau_months", "smog", "nouns_per_sentence",
                          "verbs_per_sentence", "word_count", "avg_word_len"});
  std::vector<TextIndicators> rows;
  std::vector<std::string> row;
  while (reader.next(row)) {
    TextIndicators t;
    t.student_id = row[0];
    t.tau = csv::parse_double(row[1]);
    t.quality.smog = csv::parse_double(row[2]);
    t.quality.nouns_per_sentence = csv::parse_double(row[3]);
    t.quality.verbs_per_sentence = csv::parse_double(row[4]);
    t.quality.word_count = csv::parse_double(row[5]);
    t.quality.avg_word_length = csv::parse_double(row[6]);
    rows.push_back(std::move(t));
  }
  return rows;
}

void write_quality_curves(const std::vector<std::vector<CurvePoint>>& curves,
                          std::ostream& out) {
  csv::write_row(out, {"cluster", "grid_index", "smog", "nouns_per_sentence",
                       "verbs_per_sentence", "word_count", "avg_word_len",
                       "n_texts"});
  for (size_t r = 0; r < curves.size(); ++r) {
    for (const auto& p : curves[r]) {
      csv::write_row(out, {std::to_string(r), std::to_string(p.grid_index),
                           csv::format(p.mean.smog),
                           csv::format(p.mean.nouns_per_sentence),
                           csv::format(p.mean.verbs_per_sentence),
                           csv::format(p.mean.word_count),
                           csv::format(p.mean.avg_word_length),
                           std::to_string(p.n_texts)});
    }
  }
}

}  // namespace stylo
