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

#include "hatex/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hatex/metrics.h"

namespace hatex {

OptimizerKind ParseOptimizer(const std::string& name) {
  if (name == "adagrad") return OptimizerKind::kAdagrad;
  if (name == "adam") return OptimizerKind::kAdam;
  throw ContractError("unknown optimizer '" + name + "'");
}

const char* ToString(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "adagrad";
}

void TrainConfig::Validate() const {
  if (!(learning_rate >= 0.0)) throw ContractError("learning rate must be >= 0");
  if (epochs < 1) throw ContractError("epochs must be >= 1");
  if (batch_size < 1) throw ContractError("batch size must be >= 1");
  if (!(clip_norm >= 0.0)) throw ContractError("clip norm must be >= 0");
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate,
                     const std::vector<Matrix*>& params)
    : kind_(kind), lr_(learning_rate) {
  // Adagrad starts its accumulator at 0.1, not 0.
  const Real init = kind == OptimizerKind::kAdagrad ? 0.1 : 0.0;
  for (const Matrix* p : params) {
    first_.push_back(Matrix::Constant(p->rows(), p->cols(), init));
    if (kind == OptimizerKind::kAdam) {
      second_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
}

void Optimizer::Step(const std::vector<Matrix*>& params,
                     const std::vector<Matrix>& grads) {
  ++step_;
  for (size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k];
    const Matrix& g = grads[k];
    if (kind_ == OptimizerKind::kAdagrad) {
      first_[k].array() += g.array().square();
      p.array() -= lr_ * g.array() / (first_[k].array().sqrt() + 1e-7);
    } else {
      constexpr Real kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
      first_[k] = kBeta1 * first_[k] + (1.0 - kBeta1) * g;
      second_[k].array() =
          kBeta2 * second_[k].array() + (1.0 - kBeta2) * g.array().square();
      const Real c1 = 1.0 - std::pow(kBeta1, static_cast<Real>(step_));
      const Real c2 = 1.0 - std::pow(kBeta2, static_cast<Real>(step_));
      p.array() -= lr_ * (first_[k].array() / c1) /
                   ((second_[k].array() / c2).sqrt() + kEps);
    }
  }
}

namespace {

template <typename Fn>
ForwardTrace Guarded(int epoch, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericError& e) {
    throw TrainingError("training diverged in epoch " + std::to_string(epoch) +
                        ": " + e.what());
  }
}

// Shared loop: `trace_of(i, mode, rng)` runs the forward pass of example i.
TrainHistory RunTraining(
    ModelGraph& model, size_t n, const std::vector<int>& labels,
    const TrainConfig& config,
    const std::function<ForwardTrace(size_t, Mode, std::mt19937_64*)>& trace_of) {
  config.Validate();
  if (n == 0) throw ContractError("training set is empty");
  for (int y : labels) {
    if (y < 0 || y >= model.num_classes()) {
      throw ContractError("training label out of range");
    }
  }
  std::mt19937_64 rng(config.seed);
  auto params = model.Parameters();
  Optimizer opt(config.optimizer, config.learning_rate, params);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainHistory history;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (size_t start = 0; start < n; start += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(n, start + static_cast<size_t>(config.batch_size));
      auto grads = model.ZeroGradients();
      for (size_t b = start; b < end; ++b) {
        const size_t i = order[b];
        const ForwardTrace trace = Guarded(epoch, [&] {
          return trace_of(i, Mode::kTrain, &rng);
        });
        const int y = labels[i];
        loss_sum -= std::log(std::max(trace.probs(y), 1e-300));
        RowVector grad = trace.probs;
        grad(y) -= 1.0;
        model.Backward(trace, grad, &grads);
      }
      const Real scale = 1.0 / static_cast<Real>(end - start);
      Real norm2 = 0.0;
      for (auto& g : grads) {
        g *= scale;
        norm2 += g.squaredNorm();
      }
      if (!std::isfinite(norm2)) {
        throw TrainingError("training diverged in epoch " + std::to_string(epoch) +
                            ": non-finite gradient");
      }
      if (config.clip_norm > 0.0 && norm2 > config.clip_norm * config.clip_norm) {
        const Real shrink = config.clip_norm / std::sqrt(norm2);
        for (auto& g : grads) g *= shrink;
      }
      opt.Step(params, grads);
      if (model.token_input()) params.front()->row(Vocabulary::kPad).setZero();
    }
    const double loss = loss_sum / static_cast<double>(n);
    if (!std::isfinite(loss)) {
      throw TrainingError("training diverged in epoch " + std::to_string(epoch) +
                          ": loss is NaN");
    }
    std::vector<int> predicted(n);
    for (size_t i = 0; i < n; ++i) {
      Index best = 0;
      Guarded(epoch, [&] { return trace_of(i, Mode::kEval, nullptr); })
          .probs.maxCoeff(&best);
      predicted[i] = static_cast<int>(best);
    }
    history.epochs.push_back(
        {epoch, loss, MacroF1(labels, predicted, model.num_classes())});
  }
  return history;
}

}  // namespace

TrainHistory Train(ModelGraph& model, const LabeledCorpus& corpus,
                   const TrainConfig& config) {
  if (!model.token_input()) throw ContractError("Train expects a token model");
  std::vector<std::vector<int>> ids;
  std::vector<int> labels;
  for (const auto& doc : corpus.documents) {
    ids.push_back(model.Encode(doc.tokens));
    labels.push_back(doc.label);
  }
  return RunTraining(model, ids.size(), labels, config,
                     [&](size_t i, Mode mode, std::mt19937_64* rng) {
                       return model.Forward(ids[i], mode, rng);
                     });
}

TrainHistory TrainFeatures(ModelGraph& model, const SparseMatrix& features,
                           const std::vector<int>& labels,
                           const TrainConfig& config) {
  if (model.token_input()) throw ContractError("TrainFeatures expects a feature model");
  if (features.rows() != static_cast<Index>(labels.size())) {
    throw ContractError("feature rows and labels differ in length");
  }
  return RunTraining(model, labels.size(), labels, config,
                     [&](size_t i, Mode mode, std::mt19937_64* rng) {
                       const RowVector row = features.row(static_cast<Index>(i));
                       return model.ForwardInput(row, mode, rng);
                     });
}

}  // namespace hatex
