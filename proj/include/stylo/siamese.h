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

// Siamese character-level convolutional network for writing-style
// similarity.
//
// Each text is mapped to code-point indices, embedded (lookup followed by
// ReLU), passed through two parallel 1-D convolution banks and reduced with
// global max pooling; the two pooled vectors are concatenated into the text
// encoding. Two encodings are compared through their element-wise absolute
// difference, a stack of ReLU dense layers with dropout and a two-way
// softmax whose first component is the similarity.

#ifndef STYLO_SIAMESE_H_
#define STYLO_SIAMESE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <algorithm>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stylo/corpus.h"
#include "stylo/rng.h"
#include "stylo/similarity.h"

namespace stylo {

// Maps code points to embedding rows. Row 0 is reserved for characters
// outside the vocabulary.
class CharVocab {
 public:
  static constexpr uint32_t kUnknown = 0;

  CharVocab() = default;
  explicit CharVocab(std::vector<char32_t> chars);

  // Characters occurring at least min_count times across the corpus.
  static CharVocab build(const Corpus& corpus, size_t min_count = 10);

  uint32_t index(char32_t c) const;
  std::vector<uint32_t> encode(std::string_view text) const;

  // Number of embedding rows, including the unknown row.
  size_t size() const { return chars_.size() + 1; }
  const std::vector<char32_t>& chars() const { return chars_; }

  friend bool operator==(const CharVocab&, const CharVocab&) = default;

 private:
  std::vector<char32_t> chars_;  // Sorted; index i + 1.
};

struct Architecture {
  size_t embedding_dim = 5;
  size_t kernel_a = 8;
  size_t filters_a = 700;
  size_t kernel_b = 4;
  size_t filters_b = 500;
  size_t dense_layers = 4;
  size_t dense_width = 500;
  double dropout = 0.3;

  // Full-size network: d=5, 700 + 500 filters, 4 x 500 dense.
  static Architecture paper();
  // Reduced widths for laptop-scale experiments: 64 + 48 filters, 4 x 64.
  static Architecture desk();

  size_t encoding_size() const { return filters_a + filters_b; }
  size_t min_text_length() const { return std::max(kernel_a, kernel_b); }

  // Throws UsageError on zero sizes or dropout outside [0, 1).
  void validate() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// All trainable parameters in one flat buffer, with named views per layer.
// Also used to hold gradients of the same shape.
class SiameseParams {
 public:
  struct Group {
    std::string name;
    size_t offset = 0;
    size_t size = 0;
  };

  SiameseParams() = default;
  SiameseParams(const Architecture& arch, size_t vocab_size);

  // Glorot/He uniform weights, zero biases.
  void initialize(uint64_t seed);
  void zero();

  const Architecture& arch() const { return arch_; }
  size_t vocab_size() const { return vocab_size_; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  const std::vector<Group>& groups() const { return groups_; }

  // vocab_size x embedding_dim.
  std::span<double> embedding() { return view(embedding_); }
  std::span<const double> embedding() const { return view(embedding_); }
  // filters x kernel x embedding_dim, kernel-major within a filter.
  std::span<double> conv_weights(int bank) { return view(conv_w_[bank]); }
  std::span<const double> conv_weights(int bank) const {
    return view(conv_w_[bank]);
  }
  std::span<double> conv_bias(int bank) { return view(conv_b_[bank]); }
  std::span<const double> conv_bias(int bank) const {
    return view(conv_b_[bank]);
  }
  // out x in, row-major.
  std::span<double> dense_weights(size_t layer) { return view(dense_w_[layer]); }
  std::span<const double> dense_weights(size_t layer) const {
    return view(dense_w_[layer]);
  }
  std::span<double> dense_bias(size_t layer) { return view(dense_b_[layer]); }
  std::span<const double> dense_bias(size_t layer) const {
    return view(dense_b_[layer]);
  }
  // 2 x dense_width.
  std::span<double> output_weights() { return view(out_w_); }
  std::span<const double> output_weights() const { return view(out_w_); }
  std::span<double> output_bias() { return view(out_b_); }
  std::span<const double> output_bias() const { return view(out_b_); }

 private:
  size_t add_group(const std::string& name, size_t size);
  std::span<double> view(size_t g) {
    return std::span(data_).subspan(groups_[g].offset, groups_[g].size);
  }
  std::span<const double> view(size_t g) const {
    return std::span(data_).subspan(groups_[g].offset, groups_[g].size);
  }

  Architecture arch_;
  size_t vocab_size_ = 0;
  std::vector<double> data_;
  std::vector<Group> groups_;
  size_t embedding_ = 0;
  size_t conv_w_[2] = {0, 0};
  size_t conv_b_[2] = {0, 0};
  std::vector<size_t> dense_w_;
  std::vector<size_t> dense_b_;
  size_t out_w_ = 0;
  size_t out_b_ = 0;
};

// Forward state of the encoder for one text, kept for backpropagation.
struct EncoderTrace {
  std::vector<uint32_t> ids;
  // embedding_dim x length, channel-major, after ReLU.
  std::vector<double> activations;
  // filters_a + filters_b pooled values.
  std::vector<double> features;
  // Window start that produced each pooled value.
  std::vector<uint32_t> argmax;
};

// Forward state of the comparison head for one pair.
struct HeadTrace {
  std::vector<double> merged;
  // Post-activation (and post-dropout) output of each dense layer.
  std::vector<std::vector<double>> hidden;
  // Dropout keep-mask scaled by 1 / (1 - rate); empty at inference.
  std::vector<std::vector<double>> masks;
  double logits[2] = {0.0, 0.0};
  double probs[2] = {0.0, 0.0};
};

// Stateless network arithmetic over a parameter set.
class SiameseNetwork {
 public:
  explicit SiameseNetwork(const SiameseParams& params) : params_(params) {}

  // Throws DataError when ids are shorter than the largest kernel.
  EncoderTrace encode(std::vector<uint32_t> ids) const;

  // dropout_rng == nullptr disables dropout.
  HeadTrace compare(std::span<const double> enc_a, std::span<const double> enc_b,
                    Rng* dropout_rng = nullptr) const;

  // Cross-entropy of the head output against the label (1 = same author).
  static double loss(const HeadTrace& head, int label);

  // Accumulates d loss / d params of the head into grads and returns
  // d loss / d enc_a (the gradient w.r.t. enc_b is its negation).
  std::vector<double> backward_head(const HeadTrace& head,
                                    std::span<const double> enc_a,
                                    std::span<const double> enc_b, int label,
                                    SiameseParams& grads) const;

  // Accumulates encoder parameter gradients given d loss / d features.
  void backward_encoder(const EncoderTrace& trace,
                        std::span<const double> d_features,
                        SiameseParams& grads) const;

  // Full pair loss with gradient accumulation; returns the loss.
  double pair_loss_and_grad(const EncoderTrace& a, const EncoderTrace& b,
                            int label, SiameseParams& grads,
                            Rng* dropout_rng = nullptr) const;

 private:
  const SiameseParams& params_;
};

struct SiameseModel {
  CharVocab vocab;
  SiameseParams params;

  std::vector<double> encode(std::string_view text) const;
  double similarity(std::string_view a, std::string_view b) const;
};

// Checkpoint: magic, format version, JSON header (vocabulary, architecture),
// then the flat parameter array as little-endian doubles. Loading a file with
// another format version throws DataError.
inline constexpr uint32_t kCheckpointVersion = 1;
void save_model(const SiameseModel& model, std::ostream& out);
void save_model(const SiameseModel& model, const std::filesystem::path& path);
SiameseModel load_model(std::istream& in);
SiameseModel load_model(const std::filesystem::path& path);

// SimilarityFunction adapter with a per-text encoding cache.
class SiameseSimilarity : public SimilarityFunction {
 public:
  explicit SiameseSimilarity(std::shared_ptr<const SiameseModel> model)
      : model_(std::move(model)) {}

  double similarity(std::string_view a, std::string_view b) const override;
  const SiameseModel& model() const { return *model_; }

 private:
  std::shared_ptr<const std::vector<double>> encoding(std::string_view text) const;

  std::shared_ptr<const SiameseModel> model_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, std::shared_ptr<const std::vector<double>>>
      cache_;
};

// Similarity from two precomputed encodings (inference mode).
double similarity_from_encodings(const SiameseParams& params,
                                 std::span<const double> enc_a,
                                 std::span<const double> enc_b);

}  // namespace stylo

#endif  // STYLO_SIAMESE_H_
