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

#include "hatex/model.h"

#include <algorithm>

namespace hatex {

ModelGraph::ModelGraph(ModelSpec spec, Vocabulary vocab,
                       std::vector<std::string> class_names, uint64_t seed)
    : spec_(std::move(spec)),
      vocab_(std::move(vocab)),
      class_names_(std::move(class_names)) {
  if (class_names_.size() < 2) throw BuildError("model needs at least 2 classes");
  if (spec_.input.length < 1) throw BuildError("input length must be >= 1");
  if (spec_.layers.empty() || spec_.layers.back().kind != LayerKind::kSoftmax) {
    throw BuildError("architecture must end in Softmax(" +
                     std::to_string(class_names_.size()) + ")");
  }
  if (spec_.layers.back().units != num_classes()) {
    throw BuildError(spec_.layers.back().ToString() + " does not match " +
                     std::to_string(class_names_.size()) + " classes");
  }

  std::mt19937_64 rng(seed);
  size_t first = 0;
  Shape shape;
  std::string prev;
  if (token_input()) {
    const std::string input_name =
        "Input(tokens, " + std::to_string(spec_.input.length) + ")";
    const LayerSpec& head = spec_.layers.front();
    if (head.kind != LayerKind::kEmbedding) {
      throw BuildError(head.ToString() + " cannot consume token ids from " +
                       input_name + ": the first layer must be an Embedding");
    }
    if (head.units < 1) throw BuildError("Embedding dimension must be >= 1");
    embedding_.resize(vocab_.size(), head.units);
    std::uniform_real_distribution<Real> dist(-0.05, 0.05);
    for (Index c = 0; c < embedding_.cols(); ++c) {
      for (Index r = 0; r < embedding_.rows(); ++r) embedding_(r, c) = dist(rng);
    }
    embedding_.row(Vocabulary::kPad).setZero();
    shape = {spec_.input.length, head.units};
    prev = head.ToString();
    first = 1;
  } else {
    shape = {1, spec_.input.length};
    prev = "Input(features, " + std::to_string(spec_.input.length) + ")";
  }

  for (size_t i = first; i < spec_.layers.size(); ++i) {
    const LayerSpec& ls = spec_.layers[i];
    if (ls.kind == LayerKind::kSoftmax && i + 1 != spec_.layers.size()) {
      throw BuildError(ls.ToString() + " must be the last layer");
    }
    const Shape next = InferShape(ls, shape, prev);
    auto layer = MakeLayer(ls, shape);
    layer->Initialize(rng);
    layers_.push_back(std::move(layer));
    shape = next;
    prev = ls.ToString();
  }
}

ModelGraph::ModelGraph(const ModelGraph& other)
    : spec_(other.spec_),
      vocab_(other.vocab_),
      class_names_(other.class_names_),
      embedding_(other.embedding_) {
  for (const auto& layer : other.layers_) layers_.push_back(layer->Clone());
}

ModelGraph& ModelGraph::operator=(const ModelGraph& other) {
  if (this != &other) {
    ModelGraph copy(other);
    *this = std::move(copy);
  }
  return *this;
}

ModelGraph::~ModelGraph() = default;

int ModelGraph::embedding_dim() const {
  return token_input() ? static_cast<int>(embedding_.cols()) : 0;
}

std::vector<int> ModelGraph::Encode(const TokenList& tokens) const {
  return vocab_.Encode(tokens, spec_.input.length);
}

Matrix ModelGraph::Embed(std::span<const int> ids) const {
  Matrix x(static_cast<Index>(ids.size()), embedding_.cols());
  for (size_t t = 0; t < ids.size(); ++t) {
    const int id = ids[t];
    if (id < 0 || id >= embedding_.rows()) {
      throw ContractError("token id " + std::to_string(id) + " out of range");
    }
    x.row(static_cast<Index>(t)) = embedding_.row(id);
  }
  return x;
}

ForwardTrace ModelGraph::Forward(std::span<const int> ids, Mode mode,
                                 std::mt19937_64* rng) const {
  if (!token_input()) throw ContractError("model expects feature rows");
  if (static_cast<int>(ids.size()) != spec_.input.length) {
    throw ContractError("input length " + std::to_string(ids.size()) +
                        " != model max_len " +
                        std::to_string(spec_.input.length));
  }
  ForwardTrace trace = ForwardInput(Embed(ids), mode, rng);
  trace.ids.assign(ids.begin(), ids.end());
  return trace;
}

ForwardTrace ModelGraph::ForwardInput(const Matrix& input, Mode mode,
                                      std::mt19937_64* rng) const {
  const Index rows = token_input() ? spec_.input.length : 1;
  const Index cols = token_input() ? embedding_.cols() : spec_.input.length;
  if (input.rows() != rows || input.cols() != cols) {
    throw ContractError("input shape mismatch");
  }
  const bool train = mode == Mode::kTrain;
  if (train && rng == nullptr) throw ContractError("training forward needs an rng");
  ForwardTrace trace;
  trace.input = input;
  trace.records.resize(layers_.size());
  const Matrix* current = &trace.input;
  for (size_t i = 0; i < layers_.size(); ++i) {
    layers_[i]->Forward(*current, train, rng, &trace.records[i]);
    if (!trace.records[i].output.allFinite()) {
      throw NumericError("non-finite activation in layer " +
                         std::to_string(i) + " " + layers_[i]->spec().ToString());
    }
    current = &trace.records[i].output;
  }
  trace.logits = trace.records.back().pre.row(0);
  trace.probs = trace.records.back().output.row(0);
  return trace;
}

Vector ModelGraph::PredictProba(const TokenList& tokens) const {
  return Forward(Encode(tokens)).probs.transpose();
}

Vector ModelGraph::PredictProbaFeatures(const RowVector& features) const {
  return ForwardInput(features).probs.transpose();
}

int ModelGraph::Predict(const TokenList& tokens) const {
  Index best = 0;
  PredictProba(tokens).maxCoeff(&best);
  return static_cast<int>(best);
}

Matrix ModelGraph::Backward(const ForwardTrace& trace,
                            const RowVector& grad_logits,
                            std::vector<Matrix>* param_grads) const {
  std::vector<Matrix> scratch;
  if (param_grads == nullptr) {
    scratch = ZeroGradients();
    param_grads = &scratch;
  }
  size_t offset = token_input() ? 1 : 0;
  std::vector<size_t> starts;
  for (const auto& layer : layers_) {
    starts.push_back(offset);
    offset += layer->params().size();
  }
  // The softmax layer takes its gradient at the logits.
  Matrix grad = grad_logits;
  for (size_t i = layers_.size(); i-- > 0;) {
    std::span<Matrix> grads(param_grads->data() + starts[i],
                            layers_[i]->params().size());
    grad = layers_[i]->Backward(grad, trace.records[i], grads);
  }
  if (token_input() && !trace.ids.empty()) {
    Matrix& g_embed = (*param_grads)[0];
    for (size_t t = 0; t < trace.ids.size(); ++t) {
      const int id = trace.ids[t];
      if (id != Vocabulary::kPad) g_embed.row(id) += grad.row(static_cast<Index>(t));
    }
  }
  return grad;
}

Matrix ModelGraph::InputGradient(const Matrix& input, int target) const {
  if (target < 0 || target >= num_classes()) throw ContractError("class out of range");
  ForwardTrace trace = ForwardInput(input);
  RowVector seed = RowVector::Zero(num_classes());
  seed(target) = 1.0;
  return Backward(trace, seed, nullptr);
}

Matrix ModelGraph::Relevance(const ForwardTrace& trace, int target,
                             const LrpConfig& cfg,
                             std::vector<LrpLayerTotals>* totals) const {
  if (target < 0 || target >= num_classes()) throw ContractError("class out of range");
  Matrix relevance = Matrix::Zero(1, num_classes());
  relevance(0, target) = trace.logits(target);
  for (size_t i = layers_.size(); i-- > 0;) {
    Matrix lower = layers_[i]->Relevance(relevance, trace.records[i], cfg);
    if (totals) {
      totals->push_back({layers_[i]->spec().kind, relevance.sum(),
                         relevance.cwiseAbs().sum(), lower.sum()});
    }
    relevance = std::move(lower);
  }
  return relevance;
}

std::vector<Matrix*> ModelGraph::Parameters() {
  std::vector<Matrix*> out;
  if (token_input()) out.push_back(&embedding_);
  for (auto& layer : layers_) {
    for (auto& p : layer->params()) out.push_back(&p);
  }
  return out;
}

std::vector<const Matrix*> ModelGraph::Parameters() const {
  std::vector<const Matrix*> out;
  if (token_input()) out.push_back(&embedding_);
  for (const auto& layer : layers_) {
    for (const auto& p : layer->params()) out.push_back(&p);
  }
  return out;
}

std::vector<const Matrix*> ModelGraph::WeightMatrices() const {
  std::vector<const Matrix*> out;
  if (token_input()) out.push_back(&embedding_);
  for (const auto& layer : layers_) {
    for (const Matrix* w : layer->WeightMatrices()) out.push_back(w);
  }
  return out;
}

std::vector<Matrix> ModelGraph::ZeroGradients() const {
  std::vector<Matrix> grads;
  for (const Matrix* p : Parameters()) {
    grads.push_back(Matrix::Zero(p->rows(), p->cols()));
  }
  return grads;
}

ModelGraph BuildModel(const ModelSpec& spec, const Vocabulary& vocab,
                      const std::vector<std::string>& class_names,
                      uint64_t seed) {
  return ModelGraph(spec, vocab, class_names, seed);
}

int InitializeEmbeddings(ModelGraph& model, const EmbeddingTable& table) {
  if (!model.token_input()) throw ContractError("model has no embedding");
  if (table.dim() != model.embedding_dim()) {
    throw ContractError("embedding table dimension " + std::to_string(table.dim()) +
                        " != model dimension " +
                        std::to_string(model.embedding_dim()));
  }
  Matrix& embedding = *model.Parameters().front();
  int copied = 0;
  for (int i = 2; i < model.vocab().size(); ++i) {
    const std::string& token = model.vocab().token(i);
    if (table.Contains(token)) {
      embedding.row(i) = table.Lookup(token).transpose();
      ++copied;
    }
  }
  return copied;
}

ModelSpec ArchitectureSpec(const std::string& name, int num_classes,
                           const ArchitectureOptions& o) {
  ModelSpec spec;
  spec.input = {InputSpec::Kind::kTokens, o.max_len};
  auto& l = spec.layers;
  l.push_back(LayerSpec::Embedding(o.embedding_dim));
  if (name == "cnn") {
    l.push_back(LayerSpec::Conv1D(o.conv_filters, o.conv_width));
    l.push_back(LayerSpec::MaxPool1D(o.pool_size));
    l.push_back(LayerSpec::Dropout(o.dropout));
    l.push_back(LayerSpec::Conv1D(std::max(1, o.conv_filters / 2), o.conv_width));
    l.push_back(LayerSpec::MaxPool1D(0));
    l.push_back(LayerSpec::Flatten());
    l.push_back(LayerSpec::GaussianNoise(o.noise));
    l.push_back(LayerSpec::Dense(o.dense_units, Activation::kRelu));
    l.push_back(LayerSpec::Dropout(o.dropout));
  } else if (name == "bilstm") {
    l.push_back(LayerSpec::BiRecurrent(o.lstm_units, true));
    l.push_back(LayerSpec::Dropout(o.dropout));
    l.push_back(LayerSpec::BiRecurrent(o.lstm_units, false));
    l.push_back(LayerSpec::GaussianNoise(o.noise));
    l.push_back(LayerSpec::Dense(o.dense_units, Activation::kRelu));
    l.push_back(LayerSpec::Dropout(o.dropout));
  } else if (name == "conv-lstm") {
    l.push_back(LayerSpec::Conv1D(o.conv_filters, o.conv_width));
    l.push_back(LayerSpec::Dropout(o.dropout));
    l.push_back(LayerSpec::MaxPool1D(o.pool_size));
    l.push_back(LayerSpec::Recurrent(o.lstm_units, false));
    l.push_back(LayerSpec::GaussianNoise(o.noise));
  } else {
    throw ContractError("unknown architecture '" + name +
                        "' (expected cnn, bilstm or conv-lstm)");
  }
  l.push_back(LayerSpec::Softmax(num_classes));
  return spec;
}

}  // namespace hatex
