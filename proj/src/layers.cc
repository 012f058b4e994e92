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

#include "hatex/layers.h"

#include <cmath>
#include <sstream>

namespace hatex {
namespace {

Matrix Activate(Activation act, const Matrix& pre) {
  switch (act) {
    case Activation::kRelu:
      return pre.cwiseMax(0.0);
    case Activation::kTanh:
      return pre.array().tanh().matrix();
    case Activation::kLinear:
      break;
  }
  return pre;
}

// d out / d pre, elementwise.
Matrix ActivationSlope(Activation act, const Matrix& pre, const Matrix& out) {
  switch (act) {
    case Activation::kRelu:
      return (pre.array() > 0.0).cast<Real>().matrix();
    case Activation::kTanh:
      return (1.0 - out.array().square()).matrix();
    case Activation::kLinear:
      break;
  }
  return Matrix::Ones(pre.rows(), pre.cols());
}

void GlorotUniform(Matrix& w, Index fan_in, Index fan_out,
                   std::mt19937_64& rng) {
  const Real limit = std::sqrt(6.0 / static_cast<Real>(fan_in + fan_out));
  std::uniform_real_distribution<Real> dist(-limit, limit);
  for (Index c = 0; c < w.cols(); ++c) {
    for (Index r = 0; r < w.rows(); ++r) w(r, c) = dist(rng);
  }
}

Real Sigmoid(Real x) { return 1.0 / (1.0 + std::exp(-x)); }

class DenseLayer final : public Layer {
 public:
  DenseLayer(const LayerSpec& spec, Shape in, Shape out) : Layer(spec, in, out) {
    params_ = {Matrix::Zero(in.cols, spec.units), Matrix::Zero(1, spec.units)};
  }
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<DenseLayer>(*this);
  }
  void Initialize(std::mt19937_64& rng) override {
    GlorotUniform(params_[0], in_.cols, spec_.units, rng);
    params_[1].setZero();
  }
  std::vector<const Matrix*> WeightMatrices() const override {
    return {&params_[0]};
  }

  void Forward(const Matrix& in, bool, std::mt19937_64*,
               LayerRecord* rec) const override {
    rec->input = in;
    rec->pre = in * params_[0] + params_[1];
    rec->output = Activate(spec_.activation, rec->pre);
  }

  Matrix Backward(const Matrix& grad_out, const LayerRecord& rec,
                  std::span<Matrix> grads) const override {
    const Matrix g = grad_out.cwiseProduct(
        ActivationSlope(spec_.activation, rec.pre, rec.output));
    grads[0].noalias() += rec.input.transpose() * g;
    grads[1] += g;
    return g * params_[0].transpose();
  }

  Matrix Relevance(const Matrix& r_out, const LayerRecord& rec,
                   const LrpConfig& cfg) const override {
    // The elementwise activation passes relevance through unchanged.
    return LrpLinear(rec.input, params_[0], params_[1], rec.pre, r_out, cfg,
                     static_cast<Real>(in_.cols));
  }
};

// 'same' padding: output row t sees input rows t - left .. t - left + width - 1.
class Conv1DLayer final : public Layer {
 public:
  Conv1DLayer(const LayerSpec& spec, Shape in, Shape out) : Layer(spec, in, out) {
    params_ = {Matrix::Zero(spec.width * in.cols, spec.units),
               Matrix::Zero(1, spec.units)};
  }
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<Conv1DLayer>(*this);
  }
  void Initialize(std::mt19937_64& rng) override {
    GlorotUniform(params_[0], spec_.width * in_.cols, spec_.width * spec_.units,
                  rng);
    params_[1].setZero();
  }
  std::vector<const Matrix*> WeightMatrices() const override {
    return {&params_[0]};
  }

  void Forward(const Matrix& in, bool, std::mt19937_64*,
               LayerRecord* rec) const override {
    rec->input = in;
    rec->pre = Patches(in) * params_[0];
    rec->pre.rowwise() += params_[1].row(0);
    rec->output = Activate(spec_.activation, rec->pre);
  }

  Matrix Backward(const Matrix& grad_out, const LayerRecord& rec,
                  std::span<Matrix> grads) const override {
    const Matrix g = grad_out.cwiseProduct(
        ActivationSlope(spec_.activation, rec.pre, rec.output));
    grads[0].noalias() += Patches(rec.input).transpose() * g;
    grads[1] += g.colwise().sum();
    return Unpatch(g * params_[0].transpose(), rec.input.rows());
  }

  Matrix Relevance(const Matrix& r_out, const LayerRecord& rec,
                   const LrpConfig& cfg) const override {
    const Matrix patches = Patches(rec.input);
    const Index channels = in_.cols;
    Matrix r_patches(patches.rows(), patches.cols());
    for (Index t = 0; t < patches.rows(); ++t) {
      const auto [first, last] = Window(t, rec.input.rows());
      const Real fan_in = static_cast<Real>((last - first) * channels);
      r_patches.row(t) = LrpLinear(patches.row(t), params_[0], params_[1],
                                   rec.pre.row(t), r_out.row(t), cfg, fan_in);
      // Padding positions are not neurons and receive nothing.
      for (Index k = 0; k < spec_.width; ++k) {
        if (k < first || k >= last) {
          r_patches.row(t).segment(k * channels, channels).setZero();
        }
      }
    }
    return Unpatch(r_patches, rec.input.rows());
  }

 private:
  Index left() const { return (spec_.width - 1) / 2; }

  // Kernel taps [first, last) that land inside a sequence of length `rows`.
  std::pair<Index, Index> Window(Index t, Index rows) const {
    Index first = 0;
    Index last = spec_.width;
    while (first < last && t - left() + first < 0) ++first;
    while (last > first && t - left() + last - 1 >= rows) --last;
    return {first, last};
  }

  Matrix Patches(const Matrix& in) const {
    const Index channels = in.cols();
    Matrix p = Matrix::Zero(in.rows(), spec_.width * channels);
    for (Index t = 0; t < in.rows(); ++t) {
      for (Index k = 0; k < spec_.width; ++k) {
        const Index src = t - left() + k;
        if (src >= 0 && src < in.rows()) {
          p.row(t).segment(k * channels, channels) = in.row(src);
        }
      }
    }
    return p;
  }

  Matrix Unpatch(const Matrix& p, Index rows) const {
    const Index channels = in_.cols;
    Matrix out = Matrix::Zero(rows, channels);
    for (Index t = 0; t < rows; ++t) {
      for (Index k = 0; k < spec_.width; ++k) {
        const Index src = t - left() + k;
        if (src >= 0 && src < rows) {
          out.row(src) += p.row(t).segment(k * channels, channels);
        }
      }
    }
    return out;
  }
};

class MaxPoolLayer final : public Layer {
 public:
  using Layer::Layer;
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<MaxPoolLayer>(*this);
  }

  void Forward(const Matrix& in, bool, std::mt19937_64*,
               LayerRecord* rec) const override {
    rec->input = in;
    const Index window = spec_.pool == 0 ? in.rows() : spec_.pool;
    const Index rows = out_.rows;
    rec->output.resize(rows, in.cols());
    rec->argmax.assign(static_cast<size_t>(rows * in.cols()), 0);
    for (Index r = 0; r < rows; ++r) {
      const Index begin = r * window;
      const Index end = std::min(begin + window, in.rows());
      for (Index c = 0; c < in.cols(); ++c) {
        Index best = begin;
        for (Index t = begin + 1; t < end; ++t) {
          if (in(t, c) > in(best, c)) best = t;
        }
        rec->output(r, c) = in(best, c);
        rec->argmax[static_cast<size_t>(r * in.cols() + c)] = best;
      }
    }
  }

  Matrix Backward(const Matrix& grad_out, const LayerRecord& rec,
                  std::span<Matrix>) const override {
    return Route(grad_out, rec);
  }

  // Winner takes all.
  Matrix Relevance(const Matrix& r_out, const LayerRecord& rec,
                   const LrpConfig&) const override {
    return Route(r_out, rec);
  }

 private:
  static Matrix Route(const Matrix& upper, const LayerRecord& rec) {
    Matrix lower = Matrix::Zero(rec.input.rows(), rec.input.cols());
    for (Index r = 0; r < upper.rows(); ++r) {
      for (Index c = 0; c < upper.cols(); ++c) {
        lower(rec.argmax[static_cast<size_t>(r * upper.cols() + c)], c) +=
            upper(r, c);
      }
    }
    return lower;
  }
};

// LSTM with gate order [input, forget, cell, output]. Parameters per
// direction: Wx (C x 4H), Wh (H x 4H), b (1 x 4H). The backward direction
// reads the sequence from the end; its outputs stay aligned with the input
// positions.
class LstmLayer final : public Layer {
 public:
  LstmLayer(const LayerSpec& spec, Shape in, Shape out, int directions)
      : Layer(spec, in, out), directions_(directions) {
    const Index h = spec.units;
    for (int d = 0; d < directions_; ++d) {
      params_.push_back(Matrix::Zero(in.cols, 4 * h));
      params_.push_back(Matrix::Zero(h, 4 * h));
      params_.push_back(Matrix::Zero(1, 4 * h));
    }
  }
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<LstmLayer>(*this);
  }
  void Initialize(std::mt19937_64& rng) override {
    const Index h = spec_.units;
    for (int d = 0; d < directions_; ++d) {
      GlorotUniform(params_[static_cast<size_t>(3 * d)], in_.cols, 4 * h, rng);
      GlorotUniform(params_[static_cast<size_t>(3 * d + 1)], h, 4 * h, rng);
      Matrix& b = params_[static_cast<size_t>(3 * d + 2)];
      b.setZero();
      b.middleCols(h, h).setOnes();  // forget gate bias
    }
  }
  std::vector<const Matrix*> WeightMatrices() const override {
    std::vector<const Matrix*> out;
    for (int d = 0; d < directions_; ++d) {
      out.push_back(&params_[static_cast<size_t>(3 * d)]);
      out.push_back(&params_[static_cast<size_t>(3 * d + 1)]);
    }
    return out;
  }

  void Forward(const Matrix& in, bool, std::mt19937_64*,
               LayerRecord* rec) const override {
    const Index steps = in.rows();
    const Index h = spec_.units;
    rec->input = in;
    rec->pre.resize(steps, 4 * h * directions_);
    rec->aux.clear();
    for (int d = 0; d < directions_; ++d) {
      const Matrix& wx = params_[static_cast<size_t>(3 * d)];
      const Matrix& wh = params_[static_cast<size_t>(3 * d + 1)];
      const Matrix& b = params_[static_cast<size_t>(3 * d + 2)];
      Matrix gates(steps, 4 * h), cells(steps, h), hidden(steps, h);
      RowVector hp = RowVector::Zero(h);
      RowVector cp = RowVector::Zero(h);
      for (Index s = 0; s < steps; ++s) {
        const Index t = d == 0 ? s : steps - 1 - s;
        const RowVector pre = in.row(t) * wx + hp * wh + b;
        rec->pre.row(t).segment(4 * h * d, 4 * h) = pre;
        RowVector act(4 * h);
        for (Index u = 0; u < h; ++u) {
          act(u) = Sigmoid(pre(u));
          act(h + u) = Sigmoid(pre(h + u));
          act(2 * h + u) = std::tanh(pre(2 * h + u));
          act(3 * h + u) = Sigmoid(pre(3 * h + u));
        }
        const RowVector c = act.segment(h, h).cwiseProduct(cp) +
                            act.head(h).cwiseProduct(act.segment(2 * h, h));
        const RowVector hn =
            act.tail(h).cwiseProduct(c.array().tanh().matrix());
        gates.row(t) = act;
        cells.row(t) = c;
        hidden.row(t) = hn;
        hp = hn;
        cp = c;
      }
      rec->aux.push_back(std::move(gates));
      rec->aux.push_back(std::move(cells));
      rec->aux.push_back(std::move(hidden));
    }
    rec->output.resize(out_.rows, out_.cols);
    for (int d = 0; d < directions_; ++d) {
      const Matrix& hidden = rec->aux[static_cast<size_t>(3 * d + 2)];
      if (spec_.return_sequences) {
        rec->output.middleCols(h * d, h) = hidden;
      } else {
        rec->output.middleCols(h * d, h) =
            hidden.row(d == 0 ? steps - 1 : 0);
      }
    }
  }

  Matrix Backward(const Matrix& grad_out, const LayerRecord& rec,
                  std::span<Matrix> grads) const override {
    const Index steps = rec.input.rows();
    const Index h = spec_.units;
    Matrix grad_in = Matrix::Zero(steps, in_.cols);
    for (int d = 0; d < directions_; ++d) {
      const Matrix dh_out = HiddenSlice(grad_out, d, steps);
      const Matrix& wx = params_[static_cast<size_t>(3 * d)];
      const Matrix& wh = params_[static_cast<size_t>(3 * d + 1)];
      const Matrix& gates = rec.aux[static_cast<size_t>(3 * d)];
      const Matrix& cells = rec.aux[static_cast<size_t>(3 * d + 1)];
      const Matrix& hidden = rec.aux[static_cast<size_t>(3 * d + 2)];
      Matrix& g_wx = grads[static_cast<size_t>(3 * d)];
      Matrix& g_wh = grads[static_cast<size_t>(3 * d + 1)];
      Matrix& g_b = grads[static_cast<size_t>(3 * d + 2)];
      RowVector dh_next = RowVector::Zero(h);
      RowVector dc_next = RowVector::Zero(h);
      for (Index s = steps - 1; s >= 0; --s) {
        const Index t = d == 0 ? s : steps - 1 - s;
        const Index prev = d == 0 ? t - 1 : t + 1;
        const bool first = s == 0;
        const RowVector c_prev = first ? RowVector::Zero(h) : RowVector(cells.row(prev));
        const RowVector h_prev = first ? RowVector::Zero(h) : RowVector(hidden.row(prev));
        const auto i = gates.row(t).segment(0, h).array();
        const auto f = gates.row(t).segment(h, h).array();
        const auto g = gates.row(t).segment(2 * h, h).array();
        const auto o = gates.row(t).segment(3 * h, h).array();
        const Eigen::ArrayXXd tc = cells.row(t).array().tanh();
        const Eigen::ArrayXXd dh = (dh_out.row(t) + dh_next).array();
        const Eigen::ArrayXXd dc = dh * o * (1.0 - tc.square()) + dc_next.array();
        RowVector dpre(4 * h);
        dpre.segment(0, h) = (dc * g * i * (1.0 - i)).matrix();
        dpre.segment(h, h) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
        dpre.segment(2 * h, h) = (dc * i * (1.0 - g.square())).matrix();
        dpre.segment(3 * h, h) = (dh * tc * o * (1.0 - o)).matrix();
        dc_next = (dc * f).matrix();
        g_wx.noalias() += rec.input.row(t).transpose() * dpre;
        g_wh.noalias() += h_prev.transpose() * dpre;
        g_b += dpre;
        grad_in.row(t).noalias() += dpre * wx.transpose();
        dh_next = dpre * wh.transpose();
      }
    }
    return grad_in;
  }

  // Signal-takes-all: multiplicative gates are constants, so the cell
  // update c = f*c_prev + i*g is a two-term sum and g = tanh(x Wx + h Wh + b)
  // redistributes with the epsilon rule over [x, h_prev].
  Matrix Relevance(const Matrix& r_out, const LayerRecord& rec,
                   const LrpConfig& cfg) const override {
    const Index steps = rec.input.rows();
    const Index h = spec_.units;
    const Index channels = in_.cols;
    Matrix r_in = Matrix::Zero(steps, channels);
    for (int d = 0; d < directions_; ++d) {
      const Matrix r_hidden = HiddenSlice(r_out, d, steps);
      const Matrix& wx = params_[static_cast<size_t>(3 * d)];
      const Matrix& wh = params_[static_cast<size_t>(3 * d + 1)];
      const Matrix& b = params_[static_cast<size_t>(3 * d + 2)];
      const Matrix& gates = rec.aux[static_cast<size_t>(3 * d)];
      const Matrix& cells = rec.aux[static_cast<size_t>(3 * d + 1)];
      const Matrix& hidden = rec.aux[static_cast<size_t>(3 * d + 2)];
      Matrix w_cell(channels + h, h);
      w_cell.topRows(channels) = wx.middleCols(2 * h, h);
      w_cell.bottomRows(h) = wh.middleCols(2 * h, h);
      const RowVector b_cell = b.middleCols(2 * h, h);
      RowVector rh_carry = RowVector::Zero(h);
      RowVector rc_carry = RowVector::Zero(h);
      for (Index s = steps - 1; s >= 0; --s) {
        const Index t = d == 0 ? s : steps - 1 - s;
        const Index prev = d == 0 ? t - 1 : t + 1;
        const bool first = s == 0;
        const RowVector c_prev = first ? RowVector::Zero(h) : RowVector(cells.row(prev));
        const RowVector h_prev = first ? RowVector::Zero(h) : RowVector(hidden.row(prev));
        const RowVector rc = r_hidden.row(t) + rh_carry + rc_carry;
        RowVector r_prev(h), r_cand(h);
        for (Index u = 0; u < h; ++u) {
          const Real from_prev = gates(t, h + u) * c_prev(u);
          const Real from_cand = gates(t, u) * gates(t, 2 * h + u);
          const Real z = cells(t, u);
          const Real stab = cfg.epsilon * StabilizerSign(z);
          const Real denom = z + stab;
          const Real q = denom == 0.0 ? 0.0 : rc(u) / denom;
          r_prev(u) = (from_prev + stab / 2.0) * q;
          r_cand(u) = (from_cand + stab / 2.0) * q;
        }
        rc_carry = r_prev;
        RowVector lower(channels + h);
        lower.head(channels) = rec.input.row(t);
        lower.tail(h) = h_prev;
        const RowVector r_lower =
            LrpLinear(lower, w_cell, b_cell,
                      rec.pre.row(t).segment(4 * h * d + 2 * h, h), r_cand, cfg,
                      static_cast<Real>(channels + h));
        r_in.row(t) += r_lower.head(channels);
        rh_carry = r_lower.tail(h);
      }
    }
    return r_in;
  }

 private:
  // Per-step hidden-state slice of an output-shaped matrix for direction d.
  Matrix HiddenSlice(const Matrix& m, int d, Index steps) const {
    const Index h = spec_.units;
    if (spec_.return_sequences) return m.middleCols(h * d, h);
    Matrix full = Matrix::Zero(steps, h);
    full.row(d == 0 ? steps - 1 : 0) = m.middleCols(h * d, h);
    return full;
  }

  int directions_;
};

class DropoutLayer final : public Layer {
 public:
  using Layer::Layer;
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<DropoutLayer>(*this);
  }
  void Forward(const Matrix& in, bool train, std::mt19937_64* rng,
               LayerRecord* rec) const override {
    rec->input = in;
    rec->aux.clear();
    if (!train || spec_.rate == 0.0) {
      rec->output = in;
      return;
    }
    std::bernoulli_distribution keep(1.0 - spec_.rate);
    Matrix mask(in.rows(), in.cols());
    const Real scale = 1.0 / (1.0 - spec_.rate);
    for (Index c = 0; c < mask.cols(); ++c) {
      for (Index r = 0; r < mask.rows(); ++r) {
        mask(r, c) = keep(*rng) ? scale : 0.0;
      }
    }
    rec->output = in.cwiseProduct(mask);
    rec->aux.push_back(std::move(mask));
  }
  Matrix Backward(const Matrix& grad_out, const LayerRecord& rec,
                  std::span<Matrix>) const override {
    return rec.aux.empty() ? grad_out : Matrix(grad_out.cwiseProduct(rec.aux[0]));
  }
  Matrix Relevance(const Matrix& r_out, const LayerRecord&,
                   const LrpConfig&) const override {
    return r_out;
  }
};

class GaussianNoiseLayer final : public Layer {
 public:
  using Layer::Layer;
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<GaussianNoiseLayer>(*this);
  }
  void Forward(const Matrix& in, bool train, std::mt19937_64* rng,
               LayerRecord* rec) const override {
    rec->input = in;
    rec->aux.clear();
    if (!train || spec_.rate == 0.0) {
      rec->output = in;
      return;
    }
    std::normal_distribution<Real> noise(0.0, spec_.rate);
    Matrix added(in.rows(), in.cols());
    for (Index c = 0; c < added.cols(); ++c) {
      for (Index r = 0; r < added.rows(); ++r) added(r, c) = noise(*rng);
    }
    rec->output = in + added;
    rec->aux.push_back(std::move(added));
  }
  Matrix Backward(const Matrix& grad_out, const LayerRecord&,
                  std::span<Matrix>) const override {
    return grad_out;
  }
  Matrix Relevance(const Matrix& r_out, const LayerRecord&,
                   const LrpConfig&) const override {
    return r_out;
  }
};

class FlattenLayer final : public Layer {
 public:
  using Layer::Layer;
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<FlattenLayer>(*this);
  }
  void Forward(const Matrix& in, bool, std::mt19937_64*,
               LayerRecord* rec) const override {
    rec->input = in;
    rec->output = Flat(in);
  }
  Matrix Backward(const Matrix& grad_out, const LayerRecord& rec,
                  std::span<Matrix>) const override {
    return Unflat(grad_out, rec.input.rows(), rec.input.cols());
  }
  Matrix Relevance(const Matrix& r_out, const LayerRecord& rec,
                   const LrpConfig&) const override {
    return Unflat(r_out, rec.input.rows(), rec.input.cols());
  }

 private:
  // Row-major: entry (t, c) lands at t * C + c.
  static Matrix Flat(const Matrix& in) {
    Matrix out(1, in.size());
    for (Index t = 0; t < in.rows(); ++t) {
      out.row(0).segment(t * in.cols(), in.cols()) = in.row(t);
    }
    return out;
  }
  static Matrix Unflat(const Matrix& flat, Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index t = 0; t < rows; ++t) {
      out.row(t) = flat.row(0).segment(t * cols, cols);
    }
    return out;
  }
};

// Fully connected class layer. `pre` holds the logits; Backward and Relevance
// take their upper quantity at the logits, not at the probabilities.
class SoftmaxLayer final : public Layer {
 public:
  SoftmaxLayer(const LayerSpec& spec, Shape in, Shape out)
      : Layer(spec, in, out) {
    params_ = {Matrix::Zero(in.cols, spec.units), Matrix::Zero(1, spec.units)};
  }
  std::unique_ptr<Layer> Clone() const override {
    return std::make_unique<SoftmaxLayer>(*this);
  }
  void Initialize(std::mt19937_64& rng) override {
    GlorotUniform(params_[0], in_.cols, spec_.units, rng);
    params_[1].setZero();
  }
  std::vector<const Matrix*> WeightMatrices() const override {
    return {&params_[0]};
  }
  void Forward(const Matrix& in, bool, std::mt19937_64*,
               LayerRecord* rec) const override {
    rec->input = in;
    rec->pre = in * params_[0] + params_[1];
    const Real top = rec->pre.maxCoeff();
    const Matrix e = (rec->pre.array() - top).exp().matrix();
    rec->output = e / e.sum();
  }
  Matrix Backward(const Matrix& grad_logits, const LayerRecord& rec,
                  std::span<Matrix> grads) const override {
    grads[0].noalias() += rec.input.transpose() * grad_logits;
    grads[1] += grad_logits;
    return grad_logits * params_[0].transpose();
  }
  Matrix Relevance(const Matrix& r_logits, const LayerRecord& rec,
                   const LrpConfig& cfg) const override {
    return LrpLinear(rec.input, params_[0], params_[1], rec.pre, r_logits, cfg,
                     static_cast<Real>(in_.cols));
  }
};

std::string ShapeString(Shape s) {
  return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

}  // namespace

const char* ToString(LayerKind kind) {
  switch (kind) {
    case LayerKind::kEmbedding: return "Embedding";
    case LayerKind::kDense: return "Dense";
    case LayerKind::kConv1D: return "Conv1D";
    case LayerKind::kMaxPool1D: return "MaxPool1D";
    case LayerKind::kRecurrent: return "Recurrent";
    case LayerKind::kBiRecurrent: return "BiRecurrent";
    case LayerKind::kDropout: return "Dropout";
    case LayerKind::kGaussianNoise: return "GaussianNoise";
    case LayerKind::kFlatten: return "Flatten";
    case LayerKind::kSoftmax: return "Softmax";
  }
  return "?";
}

const char* ToString(Activation act) {
  switch (act) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "?";
}

LayerKind ParseLayerKind(const std::string& name) {
  for (auto kind : {LayerKind::kEmbedding, LayerKind::kDense, LayerKind::kConv1D,
                    LayerKind::kMaxPool1D, LayerKind::kRecurrent,
                    LayerKind::kBiRecurrent, LayerKind::kDropout,
                    LayerKind::kGaussianNoise, LayerKind::kFlatten,
                    LayerKind::kSoftmax}) {
    if (name == ToString(kind)) return kind;
  }
  throw FormatError("unknown layer kind '" + name + "'");
}

Activation ParseActivation(const std::string& name) {
  for (auto act : {Activation::kLinear, Activation::kRelu, Activation::kTanh}) {
    if (name == ToString(act)) return act;
  }
  throw FormatError("unknown activation '" + name + "'");
}

LayerSpec LayerSpec::Embedding(int dim) {
  return {.kind = LayerKind::kEmbedding, .units = dim};
}
LayerSpec LayerSpec::Dense(int units, Activation act) {
  return {.kind = LayerKind::kDense, .units = units, .activation = act};
}
LayerSpec LayerSpec::Conv1D(int filters, int width, Activation act) {
  return {.kind = LayerKind::kConv1D, .units = filters, .width = width,
          .activation = act};
}
LayerSpec LayerSpec::MaxPool1D(int pool) {
  return {.kind = LayerKind::kMaxPool1D, .pool = pool};
}
LayerSpec LayerSpec::Recurrent(int units, bool return_sequences) {
  return {.kind = LayerKind::kRecurrent, .units = units,
          .return_sequences = return_sequences};
}
LayerSpec LayerSpec::BiRecurrent(int units, bool return_sequences) {
  return {.kind = LayerKind::kBiRecurrent, .units = units,
          .return_sequences = return_sequences};
}
LayerSpec LayerSpec::Dropout(double rate) {
  return {.kind = LayerKind::kDropout, .rate = rate};
}
LayerSpec LayerSpec::GaussianNoise(double stddev) {
  return {.kind = LayerKind::kGaussianNoise, .rate = stddev};
}
LayerSpec LayerSpec::Flatten() { return {.kind = LayerKind::kFlatten}; }
LayerSpec LayerSpec::Softmax(int classes) {
  return {.kind = LayerKind::kSoftmax, .units = classes};
}

std::string LayerSpec::ToString() const {
  std::ostringstream os;
  os << hatex::ToString(kind) << "(";
  switch (kind) {
    case LayerKind::kEmbedding:
    case LayerKind::kSoftmax:
      os << units;
      break;
    case LayerKind::kDense:
      os << units << ", " << hatex::ToString(activation);
      break;
    case LayerKind::kConv1D:
      os << units << ", width=" << width << ", " << hatex::ToString(activation);
      break;
    case LayerKind::kMaxPool1D:
      os << (pool == 0 ? std::string("global") : std::to_string(pool));
      break;
    case LayerKind::kRecurrent:
    case LayerKind::kBiRecurrent:
      os << units << (return_sequences ? ", sequences" : "");
      break;
    case LayerKind::kDropout:
    case LayerKind::kGaussianNoise:
      os << rate;
      break;
    case LayerKind::kFlatten:
      break;
  }
  os << ")";
  return os.str();
}

Shape InferShape(const LayerSpec& spec, Shape in, const std::string& prev) {
  auto fail = [&](const std::string& why) -> BuildError {
    return BuildError(spec.ToString() + " cannot follow " + prev + " (" +
                      ShapeString(in) + "): " + why);
  };
  switch (spec.kind) {
    case LayerKind::kEmbedding:
      throw fail("Embedding must be the first layer of a token model");
    case LayerKind::kDense:
      if (spec.units < 1) throw fail("units must be >= 1");
      if (in.rows != 1) throw fail("expects a flat 1xN input; add Flatten");
      return {1, spec.units};
    case LayerKind::kConv1D:
      if (spec.units < 1 || spec.width < 1) throw fail("filters and width must be >= 1");
      return {in.rows, spec.units};
    case LayerKind::kMaxPool1D: {
      if (spec.pool < 0) throw fail("pool size must be >= 0");
      if (spec.pool == 0) return {1, in.cols};
      return {(in.rows + spec.pool - 1) / spec.pool, in.cols};
    }
    case LayerKind::kRecurrent:
    case LayerKind::kBiRecurrent: {
      if (spec.units < 1) throw fail("units must be >= 1");
      const Index width =
          spec.units * (spec.kind == LayerKind::kBiRecurrent ? 2 : 1);
      return {spec.return_sequences ? in.rows : 1, width};
    }
    case LayerKind::kDropout:
      if (!(spec.rate >= 0.0 && spec.rate < 1.0)) throw fail("rate must lie in [0, 1)");
      return in;
    case LayerKind::kGaussianNoise:
      if (!(spec.rate >= 0.0)) throw fail("stddev must be >= 0");
      return in;
    case LayerKind::kFlatten:
      return {1, in.rows * in.cols};
    case LayerKind::kSoftmax:
      if (spec.units < 2) throw fail("needs at least 2 classes");
      if (in.rows != 1) throw fail("expects a flat 1xN input; add Flatten");
      return {1, spec.units};
  }
  throw fail("unknown layer kind");
}

std::unique_ptr<Layer> MakeLayer(const LayerSpec& spec, Shape in) {
  const Shape out = InferShape(spec, in, "input");
  switch (spec.kind) {
    case LayerKind::kDense:
      return std::make_unique<DenseLayer>(spec, in, out);
    case LayerKind::kConv1D:
      return std::make_unique<Conv1DLayer>(spec, in, out);
    case LayerKind::kMaxPool1D:
      return std::make_unique<MaxPoolLayer>(spec, in, out);
    case LayerKind::kRecurrent:
      return std::make_unique<LstmLayer>(spec, in, out, 1);
    case LayerKind::kBiRecurrent:
      return std::make_unique<LstmLayer>(spec, in, out, 2);
    case LayerKind::kDropout:
      return std::make_unique<DropoutLayer>(spec, in, out);
    case LayerKind::kGaussianNoise:
      return std::make_unique<GaussianNoiseLayer>(spec, in, out);
    case LayerKind::kFlatten:
      return std::make_unique<FlattenLayer>(spec, in, out);
    case LayerKind::kSoftmax:
      return std::make_unique<SoftmaxLayer>(spec, in, out);
    case LayerKind::kEmbedding:
      break;
  }
  throw BuildError("Embedding is owned by the model graph");
}

}  // namespace hatex
