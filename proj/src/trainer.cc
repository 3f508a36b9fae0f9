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

#include "stylo/trainer.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "stylo/csv.h"
#include "stylo/error.h"
#include "stylo/rng.h"

namespace stylo {
namespace {

class Adam {
 public:
  Adam(const TrainConfig& cfg, size_t n)
      : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::span<double> params, std::span<const double> grads) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
      const double g = grads[i];
      m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
      v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g * g;
      params[i] -= cfg_.learning_rate * (m_[i] / c1) /
                   (std::sqrt(v_[i] / c2) + cfg_.epsilon);
    }
  }

 private:
  const TrainConfig& cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  size_t t_ = 0;
};

// Encodes every text of the corpus once with the current parameters.
std::vector<std::vector<std::vector<double>>> encode_corpus(
    const SiameseNetwork& net,
    const std::vector<std::vector<std::vector<uint32_t>>>& ids) {
  std::vector<std::vector<std::vector<double>>> out(ids.size());
  for (size_t s = 0; s < ids.size(); ++s) {
    for (const auto& text : ids[s]) out[s].push_back(net.encode(text).features);
  }
  return out;
}

std::vector<std::vector<std::vector<uint32_t>>> corpus_ids(const CharVocab& vocab,
                                                           const Corpus& corpus) {
  std::vector<std::vector<std::vector<uint32_t>>> ids(corpus.students.size());
  for (size_t s = 0; s < corpus.students.size(); ++s) {
    for (const auto& t : corpus.students[s].texts) {
      ids[s].push_back(vocab.encode(t.body));
    }
  }
  return ids;
}

EvalResult evaluate_encoded(
    const SiameseNetwork& net,
    const std::vector<std::vector<std::vector<double>>>& encodings,
    const std::vector<SimInstance>& pairs) {
  double loss = 0.0;
  size_t correct = 0;
  for (const auto& p : pairs) {
    const auto head = net.compare(encodings[p.a.student][p.a.text],
                                  encodings[p.b.student][p.b.text]);
    loss += SiameseNetwork::loss(head, p.label);
    if (round_similarity(head.probs[0]) == p.label) ++correct;
  }
  const auto n = static_cast<double>(pairs.size());
  return {loss / n, static_cast<double>(correct) / n};
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw UsageError("train.learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw UsageError("train.beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw UsageError("train.beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw UsageError("train.epsilon must be > 0");
  if (batch_size == 0) throw UsageError("train.batch_size must be >= 1");
  if (max_epochs == 0) throw UsageError("train.max_epochs must be >= 1");
  if (patience == 0) throw UsageError("train.patience must be >= 1");
}

void write_training_log(const TrainingLog& log, std::ostream& out) {
  csv::write_row(out, {"epoch", "train_loss", "val_loss", "train_acc", "val_acc"});
  for (const auto& e : log.epochs) {
    csv::write_row(out, {std::to_string(e.epoch), csv::format(e.train_loss),
                         csv::format(e.val_loss), csv::format(e.train_acc),
                         csv::format(e.val_acc)});
  }
}

TrainingLog read_training_log(std::istream& in) {
  csv::Reader reader(in, {"epoch", "train_loss", "val_loss", "train_acc", "val_acc"});
  TrainingLog log;
  std::vector<std::string> row;
  double best = INFINITY;
  while (reader.next(row)) {
    EpochMetrics e;
    e.epoch = static_cast<size_t>(csv::parse_int(row[0]));
    e.train_loss = csv::parse_double(row[1]);
    e.val_loss = csv::parse_double(row[2]);
    e.train_acc = csv::parse_double(row[3]);
    e.val_acc = csv::parse_double(row[4]);
    if (e.val_loss < best) {
      best = e.val_loss;
      log.selected_epoch = e.epoch;
    }
    log.epochs.push_back(e);
  }
  return log;
}

TrainResult train(const Corpus& train_corpus,
                  const std::vector<SimInstance>& train_pairs,
                  const Corpus& val_corpus,
                  const std::vector<SimInstance>& val_pairs,
                  const TrainConfig& cfg, const Architecture& arch) {
  cfg.validate();
  arch.validate();
  if (train_pairs.empty() || val_pairs.empty()) {
    throw DataError("training needs non-empty train and validation pairs");
  }
  std::set<std::string> train_ids;
  for (const auto& s : train_corpus.students) train_ids.insert(s.student_id);
  for (const auto& s : val_corpus.students) {
    if (train_ids.count(s.student_id)) {
      throw DataError("student '" + s.student_id +
                      "' appears in both training and validation data");
    }
  }

  TrainResult result;
  result.model.vocab = CharVocab::build(train_corpus, cfg.vocab_min_count);
  result.model.params = SiameseParams(arch, result.model.vocab.size());
  result.model.params.initialize(derive_seed(cfg.seed, "init"));
  SiameseParams& params = result.model.params;
  SiameseParams grads(arch, result.model.vocab.size());
  const SiameseNetwork net(params);

  const auto train_ids_by_text = corpus_ids(result.model.vocab, train_corpus);
  const auto val_ids_by_text = corpus_ids(result.model.vocab, val_corpus);

  Adam adam(cfg, params.flat().size());
  Rng order_rng(derive_seed(cfg.seed, "order"));
  Rng dropout_rng(derive_seed(cfg.seed, "dropout"));
  std::vector<double> best_params(params.flat().begin(), params.flat().end());
  double best_val = INFINITY;
  size_t since_best = 0;

  std::vector<size_t> order(train_pairs.size());
  for (size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    order_rng.shuffle(std::span<size_t>(order));
    const size_t visit = cfg.max_pairs_per_epoch == 0
                             ? order.size()
                             : std::min(order.size(), cfg.max_pairs_per_epoch);
    for (size_t start = 0; start < visit; start += cfg.batch_size) {
      const size_t end = std::min(visit, start + cfg.batch_size);
      grads.zero();
      double batch_loss = 0.0;
      for (size_t k = start; k < end; ++k) {
        const SimInstance& p = train_pairs[order[k]];
        const EncoderTrace ta =
            net.encode(train_ids_by_text[p.a.student][p.a.text]);
        const EncoderTrace tb =
            net.encode(train_ids_by_text[p.b.student][p.b.text]);
        batch_loss += net.pair_loss_and_grad(ta, tb, p.label, grads, &dropout_rng);
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericError("non-finite training loss in epoch " +
                           std::to_string(epoch));
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& g : grads.flat()) g *= scale;
      adam.step(params.flat(), grads.flat());
    }

    const EvalResult tr =
        evaluate_encoded(net, encode_corpus(net, train_ids_by_text), train_pairs);
    const EvalResult va =
        evaluate_encoded(net, encode_corpus(net, val_ids_by_text), val_pairs);
    if (!std::isfinite(tr.loss) || !std::isfinite(va.loss)) {
      throw NumericError("non-finite evaluation loss after epoch " +
                         std::to_string(epoch));
    }
    result.log.epochs.push_back({epoch, tr.loss, va.loss, tr.accuracy, va.accuracy});
    if (va.loss < best_val) {
      best_val = va.loss;
      result.log.selected_epoch = epoch;
      best_params.assign(params.flat().begin(), params.flat().end());
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  std::copy(best_params.begin(), best_params.end(), params.flat().begin());
  return result;
}

EvalResult evaluate_model(const SiameseModel& model, const Corpus& corpus,
                          const std::vector<SimInstance>& pairs) {
  if (pairs.empty()) throw DataError("cannot evaluate on an empty pair list");
  const SiameseNetwork net(model.params);
  return evaluate_encoded(net, encode_corpus(net, corpus_ids(model.vocab, corpus)),
                          pairs);
}

}  // namespace stylo
