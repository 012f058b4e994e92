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

#ifndef HATEX_MODEL_H_
#define HATEX_MODEL_H_

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hatex/common.h"
#include "hatex/features.h"
#include "hatex/layers.h"
#include "hatex/text.h"

namespace hatex {

// What a model consumes: fixed-length token id sequences (the first layer
// is then an Embedding) or dense feature rows such as TF-IDF vectors.
struct InputSpec {
  enum class Kind { kTokens, kFeatures };
  Kind kind = Kind::kTokens;
  int length = 100;  // max_len for tokens, feature count for features

  friend bool operator==(const InputSpec&, const InputSpec&) = default;
};

struct ModelSpec {
  InputSpec input;
  std::vector<LayerSpec> layers;
};

enum class Mode { kEval, kTrain };

// Everything recorded during one forward pass.
struct ForwardTrace {
  std::vector<int> ids;           // token models only
  Matrix input;                   // embedded T x D sequence or 1 x F features
  std::vector<LayerRecord> records;  // one per layer after the embedding
  RowVector logits;               // pre-softmax class scores f_c(x)
  RowVector probs;
};

class ModelGraph {
 public:
  // Shape-checks `spec` and initialises parameters deterministically from
  // `seed`. Token models take their embedding rows from `vocab`.
  ModelGraph(ModelSpec spec, Vocabulary vocab,
             std::vector<std::string> class_names, uint64_t seed);

  ModelGraph(const ModelGraph& other);
  ModelGraph& operator=(const ModelGraph& other);
  ModelGraph(ModelGraph&&) noexcept = default;
  ModelGraph& operator=(ModelGraph&&) noexcept = default;
  ~ModelGraph();

  const ModelSpec& spec() const { return spec_; }
  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  int num_classes() const { return static_cast<int>(class_names_.size()); }
  bool token_input() const { return spec_.input.kind == InputSpec::Kind::kTokens; }
  int input_length() const { return spec_.input.length; }
  int embedding_dim() const;

  std::vector<int> Encode(const TokenList& tokens) const;
  // T x D lookup; the pad row is all zeros.
  Matrix Embed(std::span<const int> ids) const;

  // Forward pass from a token id sequence.
  ForwardTrace Forward(std::span<const int> ids, Mode mode = Mode::kEval,
                       std::mt19937_64* rng = nullptr) const;
  // Forward pass from an already embedded sequence or a feature row.
  ForwardTrace ForwardInput(const Matrix& input, Mode mode = Mode::kEval,
                            std::mt19937_64* rng = nullptr) const;

  // Class probabilities for a document's tokens (truncated/padded).
  Vector PredictProba(const TokenList& tokens) const;
  Vector PredictProbaFeatures(const RowVector& features) const;
  int Predict(const TokenList& tokens) const;

  // d f_c / d input for every input coordinate, with f_c the pre-softmax
  // score. Shape matches the embedded input (T x D) or feature row.
  Matrix InputGradient(const Matrix& input, int target) const;

  // Back-propagates `grad_logits` (d loss / d logits) through a trace.
  // Returns the input gradient and, when `param_grads` is given, adds the
  // parameter gradients into it (parallel to Parameters()).
  Matrix Backward(const ForwardTrace& trace, const RowVector& grad_logits,
                  std::vector<Matrix>* param_grads) const;

  // Layer-wise relevance at the input for class `target`, seeded with
  // f_c(x) at the output and zero elsewhere.
  Matrix Relevance(const ForwardTrace& trace, int target, const LrpConfig& cfg,
                   std::vector<LrpLayerTotals>* totals = nullptr) const;

  // Embedding table first (token models), then each layer's parameters.
  std::vector<Matrix*> Parameters();
  std::vector<const Matrix*> Parameters() const;
  // Weight matrices only, for norm-based model selection.
  std::vector<const Matrix*> WeightMatrices() const;
  std::vector<Matrix> ZeroGradients() const;

  const std::vector<std::unique_ptr<Layer>>& layers() const { return layers_; }

 private:
  ModelSpec spec_;
  Vocabulary vocab_;
  std::vector<std::string> class_names_;
  Matrix embedding_;  // |V| x D, token models only
  std::vector<std::unique_ptr<Layer>> layers_;
};

// Convenience wrapper mirroring the model constructor.
ModelGraph BuildModel(const ModelSpec& spec, const Vocabulary& vocab,
                      const std::vector<std::string>& class_names,
                      uint64_t seed);

// Copies vectors for known tokens into the embedding table.
int InitializeEmbeddings(ModelGraph& model, const EmbeddingTable& table);

// Architectures used by the command line and the synthetic experiments.
struct ArchitectureOptions {
  int max_len = 100;
  int embedding_dim = 100;
  int conv_filters = 64;
  int conv_width = 3;
  int pool_size = 2;
  int lstm_units = 32;
  int dense_units = 128;
  double dropout = 0.2;
  double noise = 0.1;
};

// "cnn", "bilstm" or "conv-lstm".
ModelSpec ArchitectureSpec(const std::string& name, int num_classes,
                           const ArchitectureOptions& options);

}  // namespace hatex

#endif  // HATEX_MODEL_H_
