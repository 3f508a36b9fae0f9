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

#include "stylo/similarity.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "stylo/error.h"
#include "stylo/utf8.h"

namespace stylo {

NgramCounts ngram_counts(std::string_view text, size_t n) {
  if (n == 0) throw UsageError("n-gram size must be positive");
  const std::u32string chars = utf8::decode(text);
  if (chars.size() < n) {
    throw DataError("text of " + std::to_string(chars.size()) +
                    " characters is shorter than the n-gram size " +
                    std::to_string(n));
  }
  std::map<std::u32string, double> grams;
  for (size_t i = 0; i + n <= chars.size(); ++i) {
    grams[chars.substr(i, n)] += 1.0;
  }
  NgramCounts out;
  out.counts.assign(grams.begin(), grams.end());
  double sq = 0.0;
  for (const auto& [g, c] : out.counts) sq += c * c;
  out.norm = std::sqrt(sq);
  return out;
}

double cosine(const NgramCounts& a, const NgramCounts& b) {
  double dot = 0.0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() && ib != b.counts.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
  return std::clamp(dot / (a.norm * b.norm), 0.0, 1.0);
}

double ngram_cosine(std::string_view a, std::string_view b, size_t n) {
  return cosine(ngram_counts(a, n), ngram_counts(b, n));
}

std::shared_ptr<const NgramCounts> NgramCosineSimilarity::counts(
    std::string_view text) const {
  {
    std::lock_guard lock(mu_);
    const auto it = cache_.find(std::string(text));
    if (it != cache_.end()) return it->second;
  }
  auto computed = std::make_shared<const NgramCounts>(ngram_counts(text, n_));
  std::lock_guard lock(mu_);
  return cache_.emplace(std::string(text), std::move(computed)).first->second;
}

double NgramCosineSimilarity::similarity(std::string_view a,
                                         std::string_view b) const {
  // Canonical argument order keeps the result bit-identical under swaps.
  if (b < a) std::swap(a, b);
  return cosine(*counts(a), *counts(b));
}

EvalResult evaluate(const SimilarityFunction& model, const Corpus& corpus,
                    const std::vector<SimInstance>& pairs) {
  if (pairs.empty()) throw DataError("cannot evaluate on an empty pair list");
  constexpr double kFloor = 1e-15;
  double loss = 0.0;
  size_t correct = 0;
  for (const auto& p : pairs) {
    const double s = model(text_at(corpus, p.a).body, text_at(corpus, p.b).body);
    const double prob = p.label == 1 ? s : 1.0 - s;
    loss -= std::log(std::max(prob, kFloor));
    if (round_similarity(s) == p.label) ++correct;
  }
  const auto n = static_cast<double>(pairs.size());
  return {loss / n, static_cast<double>(correct) / n};
}

}  // namespace stylo
