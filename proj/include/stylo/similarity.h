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

#ifndef STYLO_SIMILARITY_H_
#define STYLO_SIMILARITY_H_

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stylo/corpus.h"

namespace stylo {

// A writing-style similarity s: T x T -> [0, 1].
class SimilarityFunction {
 public:
  virtual ~SimilarityFunction() = default;

  virtual double similarity(std::string_view a, std::string_view b) const = 0;

  double operator()(std::string_view a, std::string_view b) const {
    return similarity(a, b);
  }
};

// Sparse character n-gram counts, sorted by gram.
struct NgramCounts {
  std::vector<std::pair<std::u32string, double>> counts;
  double norm = 0.0;
};

// Throws DataError if the text has fewer than n code points.
NgramCounts ngram_counts(std::string_view text, size_t n);

double cosine(const NgramCounts& a, const NgramCounts& b);

// Cosine of character n-gram count vectors, clamped to [0, 1].
double ngram_cosine(std::string_view a, std::string_view b, size_t n = 4);

// Deterministic baseline similarity. Count vectors are memoized per text
// body; the cache is guarded so concurrent calls are safe.
class NgramCosineSimilarity : public SimilarityFunction {
 public:
  explicit NgramCosineSimilarity(size_t n = 4) : n_(n) {}

  double similarity(std::string_view a, std::string_view b) const override;
  size_t gram_size() const { return n_; }

 private:
  std::shared_ptr<const NgramCounts> counts(std::string_view text) const;

  size_t n_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, std::shared_ptr<const NgramCounts>>
      cache_;
};

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Label prediction from a similarity: 1 when s >= 0.5, so a tie counts as
// "same author".
inline int round_similarity(double s) { return s >= 0.5 ? 1 : 0; }

// Mean binary cross-entropy of s against the labels and the fraction of
// pairs where round_similarity(s) equals the label. Throws DataError for an
// empty pair list.
EvalResult evaluate(const SimilarityFunction& model, const Corpus& corpus,
                    const std::vector<SimInstance>& pairs);

}  // namespace stylo

#endif  // STYLO_SIMILARITY_H_
