// Copyright 2026 The Hatex Authors.
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

#ifndef HATEX_TRAIN_H_
#define HATEX_TRAIN_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hatex/corpus.h"
#include "hatex/features.h"
#include "hatex/model.h"

namespace hatex {

enum class OptimizerKind { kAdagrad, kAdam };

OptimizerKind ParseOptimizer(const std::string& name);
const char* ToString(OptimizerKind kind);

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::kAdagrad;
  double learning_rate = 0.01;
  int epochs = 10;
  int batch_size = 32;
  uint64_t seed = 0;
  double clip_norm = 0.0;  // global gradient norm cap; 0 disables clipping
  bool shuffle = true;

  void Validate() const;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;      // mean categorical cross-entropy over the epoch
  double macro_f1 = 0.0;  // on the training data, evaluation mode
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
};

// Minibatch training on categorical cross-entropy. Deterministic for a
// fixed config seed. Throws TrainingError naming the epoch on divergence.
TrainHistory Train(ModelGraph& model, const LabeledCorpus& corpus,
                   const TrainConfig& config);

// Same for feature-input models over rows of `features`.
TrainHistory TrainFeatures(ModelGraph& model, const SparseMatrix& features,
                           const std::vector<int>& labels,
                           const TrainConfig& config);

// Stateful optimiser over a fixed parameter list.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate,
            const std::vector<Matrix*>& params);
  void Step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads);

 private:
  OptimizerKind kind_;
  double lr_;
  long step_ = 0;
  std::vector<Matrix> first_;   // adagrad accumulator / adam first moment
  std::vector<Matrix> second_;  // adam second moment
};

}  // namespace hatex

#endif  // HATEX_TRAIN_H_
