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

#include "stylo/synth.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "stylo/csv.h"
#include "stylo/error.h"
#include "stylo/rng.h"
#include "stylo/utf8.h"

namespace stylo::synth {
namespace {

constexpr size_t kVowels[] = {0, 4, 8, 14, 20, 24, 26, 27, 28};

bool is_vowel_index(size_t i) {
  return std::find(std::begin(kVowels), std::end(kVowels), i) !=
         std::end(kVowels);
}

void normalize(std::span<double> w) {
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
}

StyleParams base_language(uint64_t seed, double spread) {
  Rng rng(seed);
  StyleParams s;
  s.unigram.resize(kAlphabetSize);
  for (size_t c = 0; c < kAlphabetSize; ++c) {
    s.unigram[c] = std::exp(rng.normal(0.0, 0.7));
  }
  normalize(s.unigram);
  s.bigram.resize(kAlphabetSize * kAlphabetSize);
  for (size_t r = 0; r < kAlphabetSize; ++r) {
    auto row = std::span(s.bigram).subspan(r * kAlphabetSize, kAlphabetSize);
    for (size_t c = 0; c < kAlphabetSize; ++c) {
      const double alternation = is_vowel_index(r) != is_vowel_index(c) ? 3.0 : 1.0;
      row[c] = alternation * std::exp(rng.normal(0.0, spread));
    }
    normalize(row);
  }
  return s;
}

// Multiplies every distribution entry by a log-normal factor.
StyleParams perturb(const StyleParams& base, double spread, Rng& rng) {
  StyleParams s = base;
  if (spread <= 0.0) return s;
  for (double& w : s.unigram) w *= std::exp(rng.normal(0.0, spread));
  normalize(s.unigram);
  for (size_t r = 0; r < kAlphabetSize; ++r) {
    auto row = std::span(s.bigram).subspan(r * kAlphabetSize, kAlphabetSize);
    for (double& w : row) w *= std::exp(rng.normal(0.0, spread));
    normalize(row);
  }
  s.mean_sentence_words *= std::exp(rng.normal(0.0, 0.15 * spread));
  s.mean_word_length *= std::exp(rng.normal(0.0, 0.08 * spread));
  s.polysyllable_rate =
      std::clamp(s.polysyllable_rate * std::exp(rng.normal(0.0, 0.3 * spread)),
                 0.0, 0.5);
  return s;
}

size_t vowel_groups(const std::vector<size_t>& word) {
  size_t groups = 0;
  bool in_group = false;
  for (size_t c : word) {
    const bool v = is_vowel_index(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups;
}

std::vector<size_t> make_word(const StyleParams& style, bool polysyllabic,
                              Rng& rng) {
  const size_t row_len = kAlphabetSize;
  for (int attempt = 0;; ++attempt) {
    const double drawn = rng.normal(style.mean_word_length, 1.5);
    size_t len = static_cast<size_t>(std::max(1.0, std::round(drawn)));
    if (polysyllabic) len = std::max<size_t>(len, 7);
    std::vector<size_t> word;
    word.reserve(len);
    word.push_back(rng.categorical(style.unigram));
    while (word.size() < len) {
      const auto row =
          std::span(style.bigram).subspan(word.back() * row_len, row_len);
      word.push_back(rng.categorical(row));
    }
    if (!polysyllabic || vowel_groups(word) >= 3) return word;
    if (attempt >= 20) {
      // Force vowel groups by interleaving: consonant positions 1, 3, 5 -> 'a'.
      for (size_t i = 1; i < word.size() && vowel_groups(word) < 3; i += 2) {
        if (!is_vowel_index(word[i])) word[i] = 0;
        if (i + 1 < word.size() && is_vowel_index(word[i + 1])) word[i + 1] = 1;
      }
      return word;
    }
  }
}

// Alphabet letters only: a-z and æ ø å share the same case offset.
char32_t upper(char32_t c) { return c - 32; }

}  // namespace

char32_t alphabet_char(size_t index) {
  static constexpr char32_t kExtra[] = {0xE6, 0xF8, 0xE5};  // æ ø å
  return index < 26 ? static_cast<char32_t>(U'a' + index) : kExtra[index - 26];
}

StyleParams blend(const StyleParams& a, const StyleParams& b, double w) {
  StyleParams s = a;
  const auto mix = [w](double x, double y) { return x + w * (y - x); };
  for (size_t i = 0; i < s.unigram.size(); ++i) {
    s.unigram[i] = mix(a.unigram[i], b.unigram[i]);
  }
  for (size_t i = 0; i < s.bigram.size(); ++i) {
    s.bigram[i] = mix(a.bigram[i], b.bigram[i]);
  }
  s.mean_sentence_words = mix(a.mean_sentence_words, b.mean_sentence_words);
  s.mean_word_length = mix(a.mean_word_length, b.mean_word_length);
  s.polysyllable_rate = mix(a.polysyllable_rate, b.polysyllable_rate);
  return s;
}

double style_distance(const StyleParams& a, const StyleParams& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.unigram.size(); ++i) {
    sum += (a.unigram[i] - b.unigram[i]) * (a.unigram[i] - b.unigram[i]);
  }
  for (size_t i = 0; i < a.bigram.size(); ++i) {
    sum += (a.bigram[i] - b.bigram[i]) * (a.bigram[i] - b.bigram[i]);
  }
  const double ds = a.mean_sentence_words - b.mean_sentence_words;
  const double dw = a.mean_word_length - b.mean_word_length;
  const double dp = a.polysyllable_rate - b.polysyllable_rate;
  return std::sqrt(sum + ds * ds + dw * dw + dp * dp);
}

std::string_view archetype_name(Archetype a) {
  switch (a) {
    case Archetype::kSuddenDrop:
      return "sudden_drop";
    case Archetype::kSteadyDecline:
      return "steady_decline";
    case Archetype::kRevertAfterBreak:
      return "revert_after_break";
    case Archetype::kSlowDecline:
      return "slow_decline";
    case Archetype::kStable:
      return "stable";
  }
  return "?";
}

Archetype parse_archetype(std::string_view name) {
  for (Archetype a : kAllArchetypes) {
    if (archetype_name(a) == name) return a;
  }
  throw UsageError("unknown archetype '" + std::string(name) + "'");
}

double drift_weight(Archetype a, double months, double horizon) {
  const double t = std::max(0.0, months);
  switch (a) {
    case Archetype::kStable:
      return 0.0;
    case Archetype::kSuddenDrop:
      return std::clamp(t - 4.0, 0.0, 1.0);
    case Archetype::kSteadyDecline:
      return std::clamp(t / horizon, 0.0, 1.0);
    case Archetype::kSlowDecline:
      return 0.4 * std::clamp(t / horizon, 0.0, 1.0);
    case Archetype::kRevertAfterBreak:
      if (t < 12.0) return std::min(1.0, t / 6.0);
      if (t < 13.5) return 1.0 - (t - 12.0) / 1.5 * 0.85;
      return 0.15;
  }
  return 0.0;
}

bool in_vacation(double months) {
  return (months >= 12.0 && months < 13.5) || (months >= 24.0 && months < 25.5);
}

std::vector<StudentPlan> plan_students(
    size_t n_students, const std::map<Archetype, double>& archetype_mix,
    uint64_t seed, const SynthOptions& options) {
  if (n_students == 0) throw UsageError("n_students must be at least 1");
  if (options.min_texts < 5 || options.max_texts > 40 ||
      options.min_texts > options.max_texts) {
    throw UsageError("texts per student must satisfy 5 <= min <= max <= 40");
  }
  if (options.min_chars == 0 || options.min_chars > options.max_chars) {
    throw UsageError("invalid character length range");
  }
  if (!(options.months > 2.0)) throw UsageError("months must exceed 2");
  std::vector<Archetype> kinds;
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& [a, w] : archetype_mix) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw UsageError("archetype weights must be finite and non-negative");
    }
    kinds.push_back(a);
    weights.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) throw UsageError("archetype weights are all zero");

  const StyleParams language = base_language(derive_seed(seed, "language"), options.language_spread);
  Rng archetype_rng(derive_seed(seed, "archetypes"));
  const size_t width = std::max<size_t>(4, std::to_string(n_students).size());

  std::vector<StudentPlan> plans;
  plans.reserve(n_students);
  for (size_t i = 0; i < n_students; ++i) {
    StudentPlan plan;
    std::string number = std::to_string(i + 1);
    number.insert(0, width - std::min<size_t>(width, number.size()), '0');
    plan.student_id = options.id_prefix + number;
    plan.archetype = kinds[archetype_rng.categorical(weights)];
    plan.seed = derive_seed(seed, i);
    Rng rng(plan.seed);
    plan.initial = perturb(language, options.author_spread, rng);
    plan.target = perturb(plan.initial, options.drift_spread, rng);

    const size_t n_texts =
        options.min_texts + rng.index(options.max_texts - options.min_texts + 1);
    const double first = rng.uniform(0.0, 0.3);
    double last = options.months - rng.uniform(0.0, 1.0);
    while (in_vacation(last)) last -= 0.25;
    // The first two hand-ins fall in the first month, so profile time (which
    // starts at the second text) lines up with the drift schedule.
    const double second = first + rng.uniform(0.25, 0.75);
    std::vector<double> months{first, second, last};
    while (months.size() < n_texts) {
      const double m = rng.uniform(first, last);
      if (!in_vacation(m)) months.push_back(m);
    }
    std::sort(months.begin(), months.end());
    plan.hand_in_months = std::move(months);
    plans.push_back(std::move(plan));
  }
  return plans;
}

std::string render_text(const StyleParams& style, size_t target_chars,
                        double name_rate, uint64_t seed) {
  Rng rng(seed);
  std::u32string out;
  out.reserve(target_chars + 64);
  while (out.size() < target_chars) {
    if (!out.empty()) out.push_back(U' ');
    const double spread = 0.35 * style.mean_sentence_words;
    const auto n_words = static_cast<size_t>(
        std::max(2.0, std::round(rng.normal(style.mean_sentence_words, spread))));
    for (size_t w = 0; w < n_words; ++w) {
      if (w) out.push_back(U' ');
      const bool poly = rng.uniform() < style.polysyllable_rate;
      const auto word = make_word(style, poly, rng);
      const bool capital = w == 0 || rng.uniform() < name_rate;
      for (size_t k = 0; k < word.size(); ++k) {
        const char32_t c = alphabet_char(word[k]);
        out.push_back(k == 0 && capital ? upper(c) : c);
      }
      if (w + 1 < n_words && rng.uniform() < 0.08) out.push_back(U',');
    }
    const double end = rng.uniform();
    out.push_back(end < 0.05 ? U'!' : end < 0.1 ? U'?' : U'.');
  }
  return utf8::encode(out);
}

SynthCorpus render_corpus(const std::vector<StudentPlan>& plans,
                          const SynthOptions& options) {
  std::vector<Text> texts;
  SynthCorpus out;
  for (const auto& plan : plans) {
    Rng rng(derive_seed(plan.seed, "lengths"));
    for (size_t k = 0; k < plan.hand_in_months.size(); ++k) {
      const double month = plan.hand_in_months[k];
      const double base_len = rng.uniform(static_cast<double>(options.min_chars),
                                          static_cast<double>(options.max_chars));
      const auto target_chars = static_cast<size_t>(
          base_len * (1.0 + options.length_growth_per_month * month));
      texts.push_back({plan.student_id, add_months(options.start, month),
                       render_text(plan.style_at(month, options.months),
                                   target_chars, options.name_rate,
                                   derive_seed(plan.seed, k + 1))});
    }
    out.labels.push_back({plan.student_id, plan.archetype});
  }
  out.corpus = make_corpus(std::move(texts));
  return out;
}

SynthCorpus gen_corpus(size_t n_students,
                       const std::map<Archetype, double>& archetype_mix,
                       uint64_t seed, const SynthOptions& options) {
  return render_corpus(plan_students(n_students, archetype_mix, seed, options),
                       options);
}

void write_labels(const std::vector<PlantedLabel>& labels, std::ostream& out) {
  csv::write_row(out, {"student_id", "archetype"});
  for (const auto& l : labels) {
    csv::write_row(out, {l.student_id, std::string(archetype_name(l.archetype))});
  }
}

std::vector<PlantedLabel> read_labels(std::istream& in) {
  csv::Reader reader(in, {"student_id", "archetype"});
  std::vector<PlantedLabel> labels;
  std::vector<std::string> row;
  while (reader.next(row)) labels.push_back({row[0], parse_archetype(row[1])});
  return labels;
}

}  // namespace stylo::synth
