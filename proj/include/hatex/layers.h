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

#ifndef HATEX_LAYERS_H_
#define HATEX_LAYERS_H_

#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hatex/common.h"
#include "hatex/lrp_rules.h"

namespace hatex {

enum class LayerKind {
  kEmbedding,
  kDense,
  kConv1D,
  kMaxPool1D,
  kRecurrent,
  kBiRecurrent,
  kDropout,
  kGaussianNoise,
  kFlatten,
  kSoftmax,
};

enum class Activation { kLinear, kRelu, kTanh };

const char* ToString(LayerKind kind);
const char* ToString(Activation act);
LayerKind ParseLayerKind(const std::string& name);
Activation ParseActivation(const std::string& name);

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  // Embedding dim, Dense units, Conv1D filters, LSTM units per direction, or
  // Softmax class count (the layer owns its class weights).
  int units = 0;
  int width = 0;  // Conv1D kernel width
  int pool = 0;   // MaxPool1D window; 0 pools the whole sequence
  double rate = 0.0;  // Dropout rate or GaussianNoise std
  Activation activation = Activation::kLinear;
  bool return_sequences = false;

  static LayerSpec Embedding(int dim);
  static LayerSpec Dense(int units, Activation act = Activation::kLinear);
  static LayerSpec Conv1D(int filters, int width,
                          Activation act = Activation::kRelu);
  static LayerSpec MaxPool1D(int pool);
  static LayerSpec Recurrent(int units, bool return_sequences = false);
  static LayerSpec BiRecurrent(int units, bool return_sequences = false);
  static LayerSpec Dropout(double rate);
  static LayerSpec GaussianNoise(double stddev);
  static LayerSpec Flatten();
  static LayerSpec Softmax(int classes);

  std::string ToString() const;
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct Shape {
  Index rows = 0;  // time steps; 1 once flat
  Index cols = 0;  // channels
  friend bool operator==(const Shape&, const Shape&) = default;
};

// Everything one layer saw and produced during a forward pass.
struct LayerRecord {
  Matrix input;   // lower-layer activations z_i
  Matrix pre;     // pre-activation sums z_j (weighted layers only)
  Matrix output;
  // Layer-specific state: dropout mask, additive noise, or per LSTM
  // direction {gates [i f g o], cells, hidden}.
  std::vector<Matrix> aux;
  std::vector<Index> argmax;  // MaxPool1D winning input row per output cell
};

// Per-layer relevance totals collected during LRP.
struct LrpLayerTotals {
  LayerKind kind;
  Real upper_sum = 0;      // sum of relevance entering from above
  Real upper_abs_sum = 0;
  Real lower_sum = 0;      // sum of relevance handed to the inputs
};

class Layer {
 public:
  Layer(LayerSpec spec, Shape in, Shape out)
      : spec_(spec), in_(in), out_(out) {}
  virtual ~Layer() = default;

  virtual std::unique_ptr<Layer> Clone() const = 0;

  // Fills rec->input/pre/output/aux. `rng` is used only when `train`.
  virtual void Forward(const Matrix& in, bool train, std::mt19937_64* rng,
                       LayerRecord* rec) const = 0;

  // Gradient with respect to the layer input. Parameter gradients are
  // accumulated into `grads`, parallel to params().
  virtual Matrix Backward(const Matrix& grad_out, const LayerRecord& rec,
                          std::span<Matrix> grads) const = 0;

  virtual Matrix Relevance(const Matrix& relevance_out, const LayerRecord& rec,
                           const LrpConfig& cfg) const = 0;

  virtual void Initialize(std::mt19937_64& /*rng*/) {}

  // Matrices that map inputs to outputs (no biases).
  virtual std::vector<const Matrix*> WeightMatrices() const { return {}; }

  const LayerSpec& spec() const { return spec_; }
  Shape input_shape() const { return in_; }
  Shape output_shape() const { return out_; }
  std::vector<Matrix>& params() { return params_; }
  const std::vector<Matrix>& params() const { return params_; }

 protected:
  LayerSpec spec_;
  Shape in_;
  Shape out_;
  std::vector<Matrix> params_;
};

// Output shape of `spec` applied to `in`, or BuildError naming `prev` and
// `spec` when they do not chain.
Shape InferShape(const LayerSpec& spec, Shape in, const std::string& prev);

// Any kind except Embedding, which the model graph owns.
std::unique_ptr<Layer> MakeLayer(const LayerSpec& spec, Shape in);

}  // namespace hatex

#endif  // HATEX_LAYERS_H_
