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

#ifndef HATEX_TESTS_SUPPORT_H_
#define HATEX_TESTS_SUPPORT_H_

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "hatex/model.h"

namespace hatex::testing {

inline Vocabulary SmallVocab(int n) {
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back("t" + std::to_string(i));
  return Vocabulary(tokens);
}

inline std::vector<std::string> ClassNames(int k) {
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back("class" + std::to_string(i));
  return names;
}

inline constexpr int kArchitectureCount = 6;

// Small token model of one of several layer stacks. Parameters are redrawn
// from N(0, scale) so activations are not stuck near initialisation.
struct RandomModelOptions {
  int max_len = 5;
  int dim = 4;
  int hidden = 3;
  int classes = 3;
  int vocab = 12;
  double scale = 0.6;
  bool zero_bias = false;
};

inline ModelSpec RandomSpec(int arch, const RandomModelOptions& o) {
  ModelSpec spec;
  spec.input = {InputSpec::Kind::kTokens, o.max_len};
  auto& l = spec.layers;
  l.push_back(LayerSpec::Embedding(o.dim));
  switch (arch % kArchitectureCount) {
    case 0:
      l.push_back(LayerSpec::Flatten());
      l.push_back(LayerSpec::Dense(o.hidden, Activation::kTanh));
      break;
    case 1:
      l.push_back(LayerSpec::Conv1D(o.hidden, 3, Activation::kRelu));
      l.push_back(LayerSpec::MaxPool1D(2));
      l.push_back(LayerSpec::Flatten());
      break;
    case 2:
      l.push_back(LayerSpec::Recurrent(o.hidden));
      break;
    case 3:
      l.push_back(LayerSpec::BiRecurrent(o.hidden));
      break;
    case 4:
      l.push_back(LayerSpec::Conv1D(o.hidden, 2, Activation::kTanh));
      l.push_back(LayerSpec::Dropout(0.2));
      l.push_back(LayerSpec::MaxPool1D(2));
      l.push_back(LayerSpec::Recurrent(o.hidden));
      l.push_back(LayerSpec::GaussianNoise(0.1));
      break;
    default:
      l.push_back(LayerSpec::Conv1D(o.hidden, 3, Activation::kLinear));
      l.push_back(LayerSpec::MaxPool1D(0));
      l.push_back(LayerSpec::Flatten());
      l.push_back(LayerSpec::Dense(o.hidden, Activation::kRelu));
      break;
  }
  l.push_back(LayerSpec::Softmax(o.classes));
  return spec;
}

inline ModelGraph RandomModel(int arch, std::mt19937_64& rng,
                              const RandomModelOptions& o = {}) {
  ModelGraph model(RandomSpec(arch, o), SmallVocab(o.vocab), ClassNames(o.classes),
                   rng());
  std::normal_distribution<Real> normal(0.0, o.scale);
  std::vector<Matrix*> params = model.Parameters();
  for (size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const bool bias = i > 0 && p.rows() == 1;
    for (Index r = 0; r < p.rows(); ++r) {
      for (Index c = 0; c < p.cols(); ++c) {
        p(r, c) = bias && o.zero_bias ? 0.0 : normal(rng);
      }
    }
    if (i == 0) p.row(Vocabulary::kPad).setZero();
  }
  return model;
}

// Random ids with at least one real token; the tail may be padding.
// `distinct` fills the whole window with distinct ids, keeping max-pool
// windows free of ties so finite differences stay away from kinks.
inline std::vector<int> RandomIds(const ModelGraph& model, std::mt19937_64& rng,
                                  bool distinct = false) {
  const int len = model.input_length();
  std::vector<int> ids(static_cast<size_t>(len), Vocabulary::kPad);
  if (distinct) {
    std::vector<int> pool;
    for (int id = 2; id < model.vocab().size(); ++id) pool.push_back(id);
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int t = 0; t < len; ++t) {
      ids[static_cast<size_t>(t)] = pool[static_cast<size_t>(t) % pool.size()];
    }
    return ids;
  }
  std::uniform_int_distribution<int> length(1, len);
  std::uniform_int_distribution<int> id(2, model.vocab().size() - 1);
  const int n = length(rng);
  for (int t = 0; t < n; ++t) ids[static_cast<size_t>(t)] = id(rng);
  return ids;
}

inline TokenList TokensOf(const ModelGraph& model, const std::vector<int>& ids) {
  TokenList tokens;
  for (int id : ids) {
    if (id != Vocabulary::kPad) tokens.push_back(model.vocab().token(id));
  }
  return tokens;
}

}  // namespace hatex::testing

#endif  // HATEX_TESTS_SUPPORT_H_
