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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "stylo/error.h"
#include "stylo/metrics.h"
#include "stylo/utf8.h"
#include "test_support.h"

namespace stylo {
namespace {

class AllOther : public Tagger {
 public:
  Tag tag(std::span<const std::string>, size_t) const override { return Tag::kOther; }
};

// Tags by exact word from a hand-written table; unknown words are other.
class TableTagger : public Tagger {
 public:
  explicit TableTagger(std::map<std::string, Tag> t) : table_(std::move(t)) {}
  Tag tag(std::span<const std::string> words, size_t i) const override {
    const auto it = table_.find(words[i]);
    return it == table_.end() ? Tag::kOther : it->second;
  }

 private:
  std::map<std::string, Tag> table_;
};

TEST(SplitSentences, Examples) {
  EXPECT_EQ(split_sentences("Hej. Hej igen!"),
            (std::vector<std::string>{"Hej.", "Hej igen!"}));
  EXPECT_TRUE(split_sentences("").empty());
  EXPECT_EQ(split_sentences("ca. 10 kr. i alt.").size(), 1u);
  EXPECT_EQ(split_sentences("Hvad nu? Intet.  Slut").size(), 3u);
  // A period inside a token is not a boundary.
  EXPECT_EQ(split_sentences("Version 2.5 er ude.").size(), 1u);
  // Case and leading punctuation do not defeat the guard.
  EXPECT_EQ(split_sentences("Det koster (Ca. 10 kr.) i alt.").size(), 1u);
}

TEST(SplitSentences, CustomAbbreviations) {
  const auto abbr = AbbreviationList::parse("# comment\n  dr. \n");
  EXPECT_EQ(split_sentences("Dr. Hansen kom. Han gik.", abbr).size(), 2u);
  EXPECT_EQ(split_sentences("Dr. Hansen kom. Han gik.", AbbreviationList{}).size(), 3u);
}

TEST(SplitWords, StripsEdgesAndKeepsPlaceholder) {
  EXPECT_EQ(split_words("  \"Hej,\" sagde ⟨NAME⟩ -- 42 (igen)."),
            (std::vector<std::string>{"Hej", "sagde", "NAME", "igen"}));
  EXPECT_EQ(split_words("blå-grøn"), (std::vector<std::string>{"blå-grøn"}));
}

TEST(Syllables, VowelGroups) {
  EXPECT_EQ(count_syllables("hus"), 1u);
  EXPECT_EQ(count_syllables("studerende"), 4u);
  EXPECT_EQ(count_syllables("b"), 1u);
  EXPECT_EQ(count_syllables("øjeblik"), 3u);
  EXPECT_EQ(count_syllables("aeiouyæøå"), 1u);
}

TEST(Syllables, CaseInvariant) {
  for (const char* w : {"studerende", "Hus", "ÆBLE", "København", "bRYGgeri"}) {
    std::u32string up = utf8::decode(w), low = up;
    for (auto& c : low) c = utf8::to_lower(c);
    for (auto& c : up) {
      if (c >= U'a' && c <= U'z') c -= 32;
      if (c >= 0xE0 && c <= 0xFE && c != 0xF7) c -= 32;
    }
    EXPECT_EQ(count_syllables(utf8::encode(up)), count_syllables(utf8::encode(low))) << w;
  }
}

TEST(Smog, ValuesAndFloor) {
  EXPECT_NEAR(smog(0, 30), 3.1291, 1e-4);
  EXPECT_NEAR(smog(0, 1), 3.1291, 1e-4);
  EXPECT_NEAR(smog(30, 30), 1.0430 * std::sqrt(30.0) + 3.1291, 1e-12);
  EXPECT_NEAR(smog(30, 30), 8.84185, 1e-5);
  EXPECT_NEAR(smog(10, 30), 6.4273, 1e-4);
  EXPECT_THROW(smog(3, 0), UndefinedMetricError);
}

TEST(Smog, Monotone) {
  for (size_t ns = 1; ns < 20; ++ns) {
    for (size_t nw = 0; nw < 40; ++nw) {
      EXPECT_LT(smog(nw, ns), smog(nw + 1, ns));
      if (nw > 0) {
        EXPECT_GT(smog(nw, ns), smog(nw, ns + 1));
      } else {
        EXPECT_EQ(smog(nw, ns), smog(nw, ns + 1));
      }
      EXPECT_GE(smog(nw, ns), kSmogIntercept);
    }
  }
}

TEST(PhraseRatios, DefinitionExamples) {
  EXPECT_EQ(phrase_ratios("Bilen kører hurtigt. Den stopper!", AllOther{}).nouns_per_sentence, 0.0);
  EXPECT_EQ(phrase_ratios("Bilen kører hurtigt. Den stopper!", AllOther{}).verbs_per_sentence, 0.0);
  const TableTagger t({{"hund", Tag::kNoun}, {"kat", Tag::kNoun}, {"mus", Tag::kNoun},
                       {"jager", Tag::kMainVerb}});
  const auto r = phrase_ratios("hund kat mus jager.", t);
  EXPECT_EQ(r.nouns_per_sentence, 3.0);
  EXPECT_EQ(r.verbs_per_sentence, 1.0);
  EXPECT_THROW(phrase_ratios("", t), UndefinedMetricError);
}

TEST(PhraseRatios, HandTaggedFixture) {
  // Five sentences; the tag of every word is listed by hand.
  const std::string body =
      "Eleven skriver en stil. Læreren læser stilen grundigt! "
      "Hvorfor regner det? Klassen spiser frokost i kantinen. Solen skinner.";
  const TableTagger t({{"Eleven", Tag::kNoun}, {"skriver", Tag::kMainVerb},
                       {"stil", Tag::kNoun}, {"Læreren", Tag::kNoun},
                       {"læser", Tag::kMainVerb}, {"stilen", Tag::kNoun},
                       {"regner", Tag::kMainVerb}, {"Klassen", Tag::kNoun},
                       {"spiser", Tag::kMainVerb}, {"frokost", Tag::kNoun},
                       {"kantinen", Tag::kNoun}, {"Solen", Tag::kNoun},
                       {"skinner", Tag::kMainVerb}});
  // Hand counts: nouns 2+2+0+3+1 = 8, verbs 1+1+1+1+1 = 5.
  const auto stats = compute_stats(body, t);
  EXPECT_EQ(stats.n_sentences, 5u);
  EXPECT_EQ(stats.n_nouns, 8u);
  EXPECT_EQ(stats.n_main_verbs, 5u);
  const auto r = phrase_ratios(body, t);
  EXPECT_DOUBLE_EQ(r.nouns_per_sentence, 8.0 / 5.0);
  EXPECT_DOUBLE_EQ(r.verbs_per_sentence, 1.0);
}

TEST(PhraseRatios, AppendingAnOtherTokenChangesNothing) {
  const HeuristicDanishTagger t;
  const std::string body = "Eleven skriver en opgave om frihed. Hun har læst bogen";
  const auto a = phrase_ratios(body + ".", t);
  const auto b = phrase_ratios(body + " og.", t);
  EXPECT_EQ(a.nouns_per_sentence, b.nouns_per_sentence);
  EXPECT_EQ(a.verbs_per_sentence, b.verbs_per_sentence);
}

TEST(HeuristicTagger, Rules) {
  const HeuristicDanishTagger t;
  const auto tags = [&](const std::string& sentence) {
    const auto words = split_words(sentence);
    std::vector<Tag> out;
    for (size_t i = 0; i < words.size(); ++i) out.push_back(t.tag(words, i));
    return out;
  };
  using enum Tag;
  EXPECT_EQ(tags("at skrive"), (std::vector<Tag>{kOther, kMainVerb}));
  EXPECT_EQ(tags("kan løbe"), (std::vector<Tag>{kOther, kMainVerb}));
  EXPECT_EQ(tags("frihed"), (std::vector<Tag>{kNoun}));
  EXPECT_EQ(tags("arbejdede"), (std::vector<Tag>{kMainVerb}));
  EXPECT_EQ(tags("hun skriver"), (std::vector<Tag>{kOther, kMainVerb}));
  EXPECT_EQ(tags("en bil"), (std::vector<Tag>{kOther, kNoun}));
  EXPECT_EQ(tags("rød"), (std::vector<Tag>{kOther}));
  EXPECT_EQ(tags("⟨NAME⟩"), (std::vector<Tag>{kNoun}));
}

TEST(Indicators, FromStats) {
  TextStats s;
  s.n_sentences = 4;
  s.n_words = 20;
  s.n_polysyllables = 5;
  s.n_nouns = 6;
  s.n_main_verbs = 3;
  s.word_chars = 110;
  const auto q = indicators(s);
  EXPECT_DOUBLE_EQ(q.smog, smog(5, 4));
  EXPECT_DOUBLE_EQ(q.nouns_per_sentence, 1.5);
  EXPECT_DOUBLE_EQ(q.verbs_per_sentence, 0.75);
  EXPECT_EQ(q.word_count, 20.0);
  EXPECT_EQ(q.avg_word_length, 5.5);
}

TEST(Indicators, StatsCountCodePoints) {
  const auto s = compute_stats("Blå æbler.", AllOther{});
  EXPECT_EQ(s.n_words, 2u);
  EXPECT_EQ(s.word_chars, 8u);
  EXPECT_EQ(s.n_polysyllables, 0u);
}

TextIndicators row(const std::string& id, double tau, double words) {
  TextIndicators t;
  t.student_id = id;
  t.tau = tau;
  t.quality = {5.0, 1.0, 0.5, words, 4.0};
  return t;
}

TEST(QualityCurve, IdenticalTextsGiveFlatCurves) {
  std::vector<TextIndicators> rows;
  for (int i = 0; i <= 20; ++i) rows.push_back(row("a", 0.1 * i, 100.0));
  const auto curve = quality_curve(rows, {{"a", 2.0}}, 0.05, 41);
  ASSERT_EQ(curve.size(), 41u);
  for (const auto& p : curve) {
    EXPECT_DOUBLE_EQ(p.mean.word_count, 100.0);
    EXPECT_DOUBLE_EQ(p.mean.smog, 5.0);
  }
}

TEST(QualityCurve, EmptyWindowsAreOmittedAndHorizonRespected) {
  const std::vector<TextIndicators> rows = {row("a", 0.0, 10.0), row("a", 5.0, 30.0),
                                            row("b", 0.2, 20.0)};
  const std::map<std::string, double> horizon = {{"a", 5.0}, {"b", 0.3}};
  const auto curve = quality_curve(rows, horizon, 0.1, 51, 1.0);
  for (const auto& p : curve) {
    const double t = p.grid_index * 0.1;
    EXPECT_TRUE(t <= 0.5 + 1e-9 || t >= 4.5 - 1e-9) << t;
    if (t > 0.3 + 1e-9 && t <= 0.5) {
      EXPECT_EQ(p.n_texts, 1u);
    }
  }
  ASSERT_FALSE(curve.empty());
  EXPECT_EQ(curve.front().grid_index, 0u);
  EXPECT_EQ(curve.front().n_texts, 2u);
  EXPECT_DOUBLE_EQ(curve.front().mean.word_count, 15.0);
  EXPECT_EQ(curve.back().grid_index, 50u);
}

TEST(QualityCurve, GrowingTextsGiveARisingWordCountCurve) {
  synth::SynthOptions opt;
  opt.length_growth_per_month = 0.05;
  opt.min_texts = 12;
  const Corpus c = testing::synthetic_corpus(30, {{synth::Archetype::kStable, 1.0}}, 3, opt);
  std::vector<TextIndicators> rows;
  std::map<std::string, double> horizon;
  const HeuristicDanishTagger tagger;
  for (const auto& s : c.students) {
    const auto origin = s.texts[1].submitted_at;
    for (size_t i = 1; i < s.texts.size(); ++i) {
      TextIndicators t;
      t.student_id = s.student_id;
      t.tau = months_between(origin, s.texts[i].submitted_at);
      t.quality = indicators(compute_stats(s.texts[i].body, tagger));
      rows.push_back(t);
      horizon[s.student_id] = t.tau;
    }
  }
  const auto curve = quality_curve(rows, horizon, 0.05, 601);
  ASSERT_GT(curve.size(), 100u);
  // Least-squares slope of word count against time.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : curve) {
    const double x = p.grid_index * 0.05, y = p.mean.word_count;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(curve.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_GT(slope, 0.0);
  double early = 0, late = 0;
  for (const auto& p : curve) {
    if (p.grid_index * 0.05 <= 3.0) early = std::max(early, p.mean.word_count);
  }
  for (const auto& p : curve) {
    if (p.grid_index * 0.05 >= 20.0) late = std::max(late, p.mean.word_count);
  }
  EXPECT_GT(late, early);
}

TEST(QualityCsv, HeadersAndRoundTrip) {
  const std::vector<TextIndicators> rows = {row("a", 0.25, 120.0), row("b", 1.0 / 3.0, 7.0)};
  std::stringstream io;
  write_text_indicators(rows, io);
  EXPECT_EQ(io.str().substr(0, io.str().find('\n')),
            "student_id,tau_months,smog,nouns_per_sentence,verbs_per_sentence,word_count,avg_word_len");
  const auto back = read_text_indicators(io);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].tau, 1.0 / 3.0);
  EXPECT_EQ(back[0].quality.word_count, 120.0);
  std::ostringstream curves;
  write_quality_curves({quality_curve(rows, {{"a", 1.0}}, 0.25, 2)}, curves);
  EXPECT_EQ(curves.str(),
            "cluster,grid_index,smog,nouns_per_sentence,verbs_per_sentence,word_count,avg_word_len,n_texts\n"
            "0,0,5,1,0.5,120,4,1\n0,1,5,1,0.5,120,4,1\n");
}

}  // namespace
}  // namespace stylo
