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

#include "stylo/siamese.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "stylo/error.h"
#include "stylo/rng.h"
#include "stylo/utf8.h"

namespace stylo {

CharVocab::CharVocab(std::vector<char32_t> chars) : chars_(std::move(chars)) {
  std::sort(chars_.begin(), chars_.end());
  chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
}

CharVocab CharVocab::build(const Corpus& corpus, size_t min_count) {
  std::map<char32_t, size_t> counts;
  for (const auto& student : corpus.students) {
    for (const auto& t : student.texts) {
      for (char32_t c : utf8::decode(t.body)) ++counts[c];
    }
  }
  std::vector<char32_t> chars;
  for (const auto& [c, n] : counts) {
    if (n >= min_count) chars.push_back(c);
  }
  return CharVocab(std::move(chars));
}

uint32_t CharVocab::index(char32_t c) const {
  const auto it = std::lower_bound(chars_.begin(), chars_.end(), c);
  if (it == chars_.end() || *it != c) return kUnknown;
  return static_cast<uint32_t>(it - chars_.begin()) + 1;
}

std::vector<uint32_t> CharVocab::encode(std::string_view text) const {
  std::vector<uint32_t> ids;
  for (char32_t c : utf8::decode(text)) ids.push_back(index(c));
  return ids;
}

Architecture Architecture::paper() { return Architecture{}; }

Architecture Architecture::desk() {
  Architecture a;
  a.filters_a = 64;
  a.filters_b = 48;
  a.dense_width = 64;
  return a;
}

void Architecture::validate() const {
  if (embedding_dim == 0 || kernel_a == 0 || kernel_b == 0 || filters_a == 0 ||
      filters_b == 0 || dense_layers == 0 || dense_width == 0) {
    throw UsageError("architecture sizes must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw UsageError("dropout must lie in [0, 1)");
  }
}

SiameseParams::SiameseParams(const Architecture& arch, size_t vocab_size)
    : arch_(arch), vocab_size_(vocab_size) {
  arch.validate();
  if (vocab_size == 0) throw UsageError("vocabulary must not be empty");
  const size_t d = arch.embedding_dim;
  embedding_ = add_group("embedding", vocab_size * d);
  conv_w_[0] = add_group("conv_a.weights", arch.filters_a * arch.kernel_a * d);
  conv_b_[0] = add_group("conv_a.bias", arch.filters_a);
  conv_w_[1] = add_group("conv_b.weights", arch.filters_b * arch.kernel_b * d);
  conv_b_[1] = add_group("conv_b.bias", arch.filters_b);
  size_t in = arch.encoding_size();
  for (size_t l = 0; l < arch.dense_layers; ++l) {
    const std::string prefix = "dense" + std::to_string(l);
    dense_w_.push_back(add_group(prefix + ".weights", arch.dense_width * in));
    dense_b_.push_back(add_group(prefix + ".bias", arch.dense_width));
    in = arch.dense_width;
  }
  out_w_ = add_group("output.weights", 2 * arch.dense_width);
  out_b_ = add_group("output.bias", 2);
  data_.assign(groups_.back().offset + groups_.back().size, 0.0);
}

size_t SiameseParams::add_group(const std::string& name, size_t size) {
  const size_t offset =
      groups_.empty() ? 0 : groups_.back().offset + groups_.back().size;
  groups_.push_back({name, offset, size});
  return groups_.size() - 1;
}

void SiameseParams::zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void SiameseParams::initialize(uint64_t seed) {
  Rng rng(seed);
  zero();
  const auto fill = [&rng](std::span<double> w, double limit) {
    for (double& x : w) x = rng.uniform(-limit, limit);
  };
  const double d = static_cast<double>(arch_.embedding_dim);
  fill(embedding(), 1.0);
  const double ka = static_cast<double>(arch_.kernel_a);
  const double kb = static_cast<double>(arch_.kernel_b);
  fill(conv_weights(0),
       std::sqrt(6.0 / (ka * d + ka * static_cast<double>(arch_.filters_a))));
  fill(conv_weights(1),
       std::sqrt(6.0 / (kb * d + kb * static_cast<double>(arch_.filters_b))));
  double in = static_cast<double>(arch_.encoding_size());
  for (size_t l = 0; l < arch_.dense_layers; ++l) {
    fill(dense_weights(l), std::sqrt(6.0 / in));
    in = static_cast<double>(arch_.dense_width);
  }
  fill(output_weights(), std::sqrt(6.0 / (in + 2.0)));
}

EncoderTrace SiameseNetwork::encode(std::vector<uint32_t> ids) const {
  const Architecture& arch = params_.arch();
  const size_t len = ids.size();
  if (len < arch.min_text_length()) {
    throw DataError("text of " + std::to_string(len) +
                    " characters is shorter than the largest kernel (" +
                    std::to_string(arch.min_text_length()) + ")");
  }
  const size_t d = arch.embedding_dim;
  const auto emb = params_.embedding();
  EncoderTrace trace;
  trace.activations.assign(d * len, 0.0);
  for (size_t p = 0; p < len; ++p) {
    const uint32_t id = ids[p] < params_.vocab_size() ? ids[p] : CharVocab::kUnknown;
    ids[p] = id;
    for (size_t c = 0; c < d; ++c) {
      trace.activations[c * len + p] = std::max(0.0, emb[id * d + c]);
    }
  }
  trace.ids = std::move(ids);
  trace.features.resize(arch.encoding_size());
  trace.argmax.resize(arch.encoding_size());

  std::vector<double> acc;
  size_t out = 0;
  for (int bank = 0; bank < 2; ++bank) {
    const size_t kernel = bank == 0 ? arch.kernel_a : arch.kernel_b;
    const size_t filters = bank == 0 ? arch.filters_a : arch.filters_b;
    const auto w = params_.conv_weights(bank);
    const auto b = params_.conv_bias(bank);
    const size_t positions = len - kernel + 1;
    acc.resize(positions);
    for (size_t f = 0; f < filters; ++f, ++out) {
      std::fill(acc.begin(), acc.end(), b[f]);
      for (size_t k = 0; k < kernel; ++k) {
        for (size_t c = 0; c < d; ++c) {
          const double wv = w[(f * kernel + k) * d + c];
          const double* x = trace.activations.data() + c * len + k;
          double* a = acc.data();
          for (size_t p = 0; p < positions; ++p) a[p] += wv * x[p];
        }
      }
      size_t best = 0;
      for (size_t p = 1; p < positions; ++p) {
        if (acc[p] > acc[best]) best = p;
      }
      trace.features[out] = acc[best];
      trace.argmax[out] = static_cast<uint32_t>(best);
    }
  }
  return trace;
}

HeadTrace SiameseNetwork::compare(std::span<const double> enc_a,
                                  std::span<const double> enc_b,
                                  Rng* dropout_rng) const {
  const Architecture& arch = params_.arch();
  HeadTrace head;
  head.merged.resize(enc_a.size());
  for (size_t i = 0; i < enc_a.size(); ++i) {
    head.merged[i] = std::abs(enc_a[i] - enc_b[i]);
  }
  const bool dropout = dropout_rng != nullptr && arch.dropout > 0.0;
  const double keep_scale = 1.0 / (1.0 - arch.dropout);
  const std::vector<double>* input = &head.merged;
  head.hidden.resize(arch.dense_layers);
  if (dropout) head.masks.resize(arch.dense_layers);
  for (size_t l = 0; l < arch.dense_layers; ++l) {
    const auto w = params_.dense_weights(l);
    const auto b = params_.dense_bias(l);
    const size_t in = input->size();
    auto& h = head.hidden[l];
    h.resize(arch.dense_width);
    for (size_t o = 0; o < arch.dense_width; ++o) {
      const double* row = w.data() + o * in;
      double sum = b[o];
      for (size_t i = 0; i < in; ++i) sum += row[i] * (*input)[i];
      h[o] = std::max(0.0, sum);
    }
    if (dropout) {
      auto& mask = head.masks[l];
      mask.resize(arch.dense_width);
      for (size_t o = 0; o < arch.dense_width; ++o) {
        mask[o] = dropout_rng->uniform() < arch.dropout ? 0.0 : keep_scale;
        h[o] *= mask[o];
      }
    }
    input = &h;
  }
  const auto wo = params_.output_weights();
  const auto bo = params_.output_bias();
  const size_t in = input->size();
  for (size_t k = 0; k < 2; ++k) {
    double sum = bo[k];
    for (size_t i = 0; i < in; ++i) sum += wo[k * in + i] * (*input)[i];
    head.logits[k] = sum;
  }
  const double m = std::max(head.logits[0], head.logits[1]);
  const double e0 = std::exp(head.logits[0] - m);
  const double e1 = std::exp(head.logits[1] - m);
  head.probs[0] = e0 / (e0 + e1);
  head.probs[1] = e1 / (e0 + e1);
  return head;
}

double SiameseNetwork::loss(const HeadTrace& head, int label) {
  // Log-softmax form stays finite for saturated outputs.
  const double m = std::max(head.logits[0], head.logits[1]);
  const double lse =
      m + std::log(std::exp(head.logits[0] - m) + std::exp(head.logits[1] - m));
  return lse - head.logits[label == 1 ? 0 : 1];
}

std::vector<double> SiameseNetwork::backward_head(const HeadTrace& head,
                                                  std::span<const double> enc_a,
                                                  std::span<const double> enc_b,
                                                  int label,
                                                  SiameseParams& grads) const {
  const Architecture& arch = params_.arch();
  const double dlogits[2] = {head.probs[0] - (label == 1 ? 1.0 : 0.0),
                             head.probs[1] - (label == 1 ? 0.0 : 1.0)};
  const auto& last = head.hidden.back();
  const size_t width = last.size();
  {
    const auto wo = params_.output_weights();
    auto gwo = grads.output_weights();
    auto gbo = grads.output_bias();
    for (size_t k = 0; k < 2; ++k) {
      gbo[k] += dlogits[k];
      for (size_t i = 0; i < width; ++i) gwo[k * width + i] += dlogits[k] * last[i];
    }
  }
  std::vector<double> grad(width);
  {
    const auto wo = params_.output_weights();
    for (size_t i = 0; i < width; ++i) {
      grad[i] = dlogits[0] * wo[i] + dlogits[1] * wo[width + i];
    }
  }
  for (size_t l = arch.dense_layers; l-- > 0;) {
    const auto& h = head.hidden[l];
    const std::vector<double>& input = l == 0 ? head.merged : head.hidden[l - 1];
    const size_t in = input.size();
    for (size_t o = 0; o < h.size(); ++o) {
      if (h[o] <= 0.0) {
        grad[o] = 0.0;
      } else if (!head.masks.empty()) {
        grad[o] *= head.masks[l][o];
      }
    }
    const auto w = params_.dense_weights(l);
    auto gw = grads.dense_weights(l);
    auto gb = grads.dense_bias(l);
    std::vector<double> grad_in(in, 0.0);
    for (size_t o = 0; o < h.size(); ++o) {
      const double g = grad[o];
      if (g == 0.0) continue;
      gb[o] += g;
      double* grow = gw.data() + o * in;
      const double* row = w.data() + o * in;
      for (size_t i = 0; i < in; ++i) {
        grow[i] += g * input[i];
        grad_in[i] += g * row[i];
      }
    }
    grad = std::move(grad_in);
  }
  for (size_t i = 0; i < grad.size(); ++i) {
    const double diff = enc_a[i] - enc_b[i];
    grad[i] = diff > 0.0 ? grad[i] : diff < 0.0 ? -grad[i] : 0.0;
  }
  return grad;
}

void SiameseNetwork::backward_encoder(const EncoderTrace& trace,
                                      std::span<const double> d_features,
                                      SiameseParams& grads) const {
  const Architecture& arch = params_.arch();
  const size_t d = arch.embedding_dim;
  const size_t len = trace.ids.size();
  std::vector<double> d_act(d * len, 0.0);
  size_t out = 0;
  for (int bank = 0; bank < 2; ++bank) {
    const size_t kernel = bank == 0 ? arch.kernel_a : arch.kernel_b;
    const size_t filters = bank == 0 ? arch.filters_a : arch.filters_b;
    const auto w = params_.conv_weights(bank);
    auto gw = grads.conv_weights(bank);
    auto gb = grads.conv_bias(bank);
    for (size_t f = 0; f < filters; ++f, ++out) {
      const double g = d_features[out];
      if (g == 0.0) continue;
      const size_t start = trace.argmax[out];
      gb[f] += g;
      for (size_t k = 0; k < kernel; ++k) {
        for (size_t c = 0; c < d; ++c) {
          const size_t wi = (f * kernel + k) * d + c;
          const size_t ai = c * len + start + k;
          gw[wi] += g * trace.activations[ai];
          d_act[ai] += g * w[wi];
        }
      }
    }
  }
  const auto emb = params_.embedding();
  auto gemb = grads.embedding();
  for (size_t p = 0; p < len; ++p) {
    const size_t row = trace.ids[p] * d;
    for (size_t c = 0; c < d; ++c) {
      if (emb[row + c] > 0.0) gemb[row + c] += d_act[c * len + p];
    }
  }
}

double SiameseNetwork::pair_loss_and_grad(const EncoderTrace& a,
                                          const EncoderTrace& b, int label,
                                          SiameseParams& grads,
                                          Rng* dropout_rng) const {
  const HeadTrace head = compare(a.features, b.features, dropout_rng);
  std::vector<double> d_enc =
      backward_head(head, a.features, b.features, label, grads);
  backward_encoder(a, d_enc, grads);
  for (double& g : d_enc) g = -g;
  backward_encoder(b, d_enc, grads);
  return loss(head, label);
}

std::vector<double> SiameseModel::encode(std::string_view text) const {
  return SiameseNetwork(params).encode(vocab.encode(text)).features;
}

double similarity_from_encodings(const SiameseParams& params,
                                 std::span<const double> enc_a,
                                 std::span<const double> enc_b) {
  return SiameseNetwork(params).compare(enc_a, enc_b).probs[0];
}

double SiameseModel::similarity(std::string_view a, std::string_view b) const {
  return similarity_from_encodings(params, encode(a), encode(b));
}

std::shared_ptr<const std::vector<double>> SiameseSimilarity::encoding(
    std::string_view text) const {
  {
    std::lock_guard lock(mu_);
    const auto it = cache_.find(std::string(text));
    if (it != cache_.end()) return it->second;
  }
  auto enc = std::make_shared<const std::vector<double>>(model_->encode(text));
  std::lock_guard lock(mu_);
  return cache_.emplace(std::string(text), std::move(enc)).first->second;
}

double SiameseSimilarity::similarity(std::string_view a,
                                     std::string_view b) const {
  const auto ea = encoding(a);
  const auto eb = encoding(b);
  return similarity_from_encodings(model_->params, *ea, *eb);
}

namespace {

constexpr char kMagic[8] = {'S', 'T', 'Y', 'L', 'O', 'S', 'N', 'N'};

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint I/O assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw DataError("truncated model checkpoint");
  }
  return value;
}

nlohmann::json arch_to_json(const Architecture& a) {
  return {{"embedding_dim", a.embedding_dim}, {"kernel_a", a.kernel_a},
          {"filters_a", a.filters_a},         {"kernel_b", a.kernel_b},
          {"filters_b", a.filters_b},         {"dense_layers", a.dense_layers},
          {"dense_width", a.dense_width},     {"dropout", a.dropout}};
}

Architecture arch_from_json(const nlohmann::json& j) {
  Architecture a;
  a.embedding_dim = j.at("embedding_dim").get<size_t>();
  a.kernel_a = j.at("kernel_a").get<size_t>();
  a.filters_a = j.at("filters_a").get<size_t>();
  a.kernel_b = j.at("kernel_b").get<size_t>();
  a.filters_b = j.at("filters_b").get<size_t>();
  a.dense_layers = j.at("dense_layers").get<size_t>();
  a.dense_width = j.at("dense_width").get<size_t>();
  a.dropout = j.at("dropout").get<double>();
  return a;
}

}  // namespace

void save_model(const SiameseModel& model, std::ostream& out) {
  nlohmann::json header;
  header["architecture"] = arch_to_json(model.params.arch());
  std::vector<uint32_t> chars(model.vocab.chars().begin(),
                              model.vocab.chars().end());
  header["vocab"] = chars;
  header["num_params"] = model.params.flat().size();
  const std::string text = header.dump();
  out.write(kMagic, sizeof(kMagic));
  write_le<uint32_t>(out, kCheckpointVersion);
  write_le<uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (double v : model.params.flat()) write_le<double>(out, v);
}

void save_model(const SiameseModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(model, out);
}

SiameseModel load_model(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a model checkpoint");
  }
  const auto version = read_le<uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint format version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kCheckpointVersion) + ")");
  }
  const auto header_len = read_le<uint64_t>(in);
  if (header_len > (1u << 26)) throw DataError("corrupt checkpoint header");
  std::string text(header_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_len))) {
    throw DataError("truncated model checkpoint");
  }
  SiameseModel model;
  try {
    const auto header = nlohmann::json::parse(text);
    std::vector<char32_t> chars;
    for (uint32_t c : header.at("vocab").get<std::vector<uint32_t>>()) {
      chars.push_back(static_cast<char32_t>(c));
    }
    model.vocab = CharVocab(std::move(chars));
    model.params =
        SiameseParams(arch_from_json(header.at("architecture")), model.vocab.size());
    if (header.at("num_params").get<size_t>() != model.params.flat().size()) {
      throw DataError("checkpoint parameter count does not match architecture");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt checkpoint header: ") + e.what());
  }
  for (double& v : model.params.flat()) v = read_le<double>(in);
  return model;
}

SiameseModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_model(in);
}

}  // namespace stylo
