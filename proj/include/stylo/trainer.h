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

#ifndef STYLO_TRAINER_H_
#define STYLO_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stylo/corpus.h"
#include "stylo/siamese.h"

namespace stylo {

struct TrainConfig {
  // Adam.
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  size_t batch_size = 32;
  size_t max_epochs = 20;
  // Epochs without a new validation-loss minimum before stopping.
  size_t patience = 3;
  // When non-zero, each epoch visits a random subset of this many pairs.
  size_t max_pairs_per_epoch = 0;
  // Minimum character frequency for the vocabulary.
  size_t vocab_min_count = 10;
  uint64_t seed = 0;

  // Throws UsageError naming the offending field.
  void validate() const;
};

struct EpochMetrics {
  size_t epoch = 0;  // 1-based.
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
};

struct TrainingLog {
  std::vector<EpochMetrics> epochs;
  // Epoch with the minimum validation loss; its parameters are returned.
  size_t selected_epoch = 0;
};

// CSV "epoch,train_loss,val_loss,train_acc,val_acc".
void write_training_log(const TrainingLog& log, std::ostream& out);
TrainingLog read_training_log(std::istream& in);

struct TrainResult {
  SiameseModel model;
  TrainingLog log;
};

// Minimizes pair cross-entropy with Adam and early stopping on the
// validation loss. Metrics are measured in inference mode after every epoch.
// Single-threaded and deterministic per seed. Throws NumericError naming the
// epoch if the loss becomes non-finite.
TrainResult train(const Corpus& train_corpus,
                  const std::vector<SimInstance>& train_pairs,
                  const Corpus& val_corpus,
                  const std::vector<SimInstance>& val_pairs,
                  const TrainConfig& cfg, const Architecture& arch);

// Inference-mode loss and accuracy with each text encoded once.
EvalResult evaluate_model(const SiameseModel& model, const Corpus& corpus,
                          const std::vector<SimInstance>& pairs);

}  // namespace stylo

#endif  // STYLO_TRAINER_H_
