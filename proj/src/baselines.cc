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

#include "hatex/baselines.h"

#include <cmath>

namespace hatex {

NaiveBayes NaiveBayes::Fit(const SparseMatrix& features,
                           const std::vector<int>& labels, int num_classes,
                           double alpha) {
  if (features.rows() != static_cast<Index>(labels.size())) {
    throw ContractError("naive bayes: feature rows and labels differ");
  }
  if (!(alpha > 0.0)) throw ContractError("naive bayes: alpha must be > 0");
  const Index f = features.cols();
  Matrix counts = Matrix::Zero(num_classes, f);
  Vector docs = Vector::Zero(num_classes);
  for (Index r = 0; r < features.rows(); ++r) {
    const int y = labels[static_cast<size_t>(r)];
    if (y < 0 || y >= num_classes) throw ContractError("naive bayes: label out of range");
    docs(y) += 1.0;
    for (SparseMatrix::InnerIterator it(features, r); it; ++it) {
      if (it.value() < 0.0) throw ContractError("naive bayes: negative feature value");
      counts(y, it.col()) += it.value();
    }
  }
  NaiveBayes nb;
  nb.log_prior_.resize(num_classes);
  nb.log_likelihood_.resize(num_classes, f);
  const Real n = static_cast<Real>(features.rows());
  for (int c = 0; c < num_classes; ++c) {
    if (docs(c) == 0.0) {
      throw ContractError("naive bayes: class " + std::to_string(c) +
                          " has no training documents (prior undefined)");
    }
    nb.log_prior_(c) = std::log(docs(c) / n);
    const Real total = counts.row(c).sum() + alpha * static_cast<Real>(f);
    nb.log_likelihood_.row(c) =
        ((counts.row(c).array() + alpha) / total).log().matrix();
  }
  return nb;
}

Vector NaiveBayes::PredictProba(const SparseVector& x) const {
  if (x.size() != log_likelihood_.cols()) {
    throw ContractError("naive bayes: feature dimension mismatch");
  }
  Vector score = log_prior_;
  for (SparseVector::InnerIterator it(x); it; ++it) {
    score += it.value() * log_likelihood_.col(it.index());
  }
  const Real top = score.maxCoeff();
  Vector p = (score.array() - top).exp().matrix();
  return p / p.sum();
}

int NaiveBayes::Predict(const SparseVector& x) const {
  Index best = 0;
  PredictProba(x).maxCoeff(&best);
  return static_cast<int>(best);
}

nlohmann::json NaiveBayes::ToJson() const {
  std::vector<double> prior(log_prior_.data(), log_prior_.data() + log_prior_.size());
  nlohmann::json rows = nlohmann::json::array();
  for (Index c = 0; c < log_likelihood_.rows(); ++c) {
    std::vector<double> row(static_cast<size_t>(log_likelihood_.cols()));
    for (Index f = 0; f < log_likelihood_.cols(); ++f) {
      row[static_cast<size_t>(f)] = log_likelihood_(c, f);
    }
    rows.push_back(row);
  }
  return {{"log_prior", prior}, {"log_likelihood", rows}};
}

NaiveBayes NaiveBayes::FromJson(const nlohmann::json& j) {
  NaiveBayes nb;
  const auto prior = j.at("log_prior").get<std::vector<double>>();
  nb.log_prior_ = Eigen::Map<const Vector>(prior.data(), static_cast<Index>(prior.size()));
  const auto& rows = j.at("log_likelihood");
  const Index f = rows.empty() ? 0 : static_cast<Index>(rows[0].size());
  nb.log_likelihood_.resize(static_cast<Index>(rows.size()), f);
  for (size_t c = 0; c < rows.size(); ++c) {
    const auto row = rows[c].get<std::vector<double>>();
    if (static_cast<Index>(row.size()) != f) throw FormatError("ragged naive bayes table");
    for (Index k = 0; k < f; ++k) nb.log_likelihood_(static_cast<Index>(c), k) = row[static_cast<size_t>(k)];
  }
  return nb;
}

ModelGraph BuildSoftmaxRegression(int num_features,
                                  const std::vector<std::string>& class_names,
                                  uint64_t seed) {
  const int k = static_cast<int>(class_names.size());
  ModelSpec spec;
  spec.input = {InputSpec::Kind::kFeatures, num_features};
  spec.layers = {LayerSpec::Softmax(k)};
  return ModelGraph(spec, Vocabulary(), class_names, seed);
}

double LogNorm(std::span<const Matrix* const> weights, double floor) {
  if (weights.empty()) throw ContractError("log-norm needs at least one weight matrix");
  double sum = 0.0;
  for (const Matrix* w : weights) {
    const double sq = w->squaredNorm();
    sum += sq > 0.0 ? std::max(std::log10(sq), floor) : floor;
  }
  return sum / static_cast<double>(weights.size());
}

double LogNorm(const ModelGraph& model, double floor) {
  const auto weights = model.WeightMatrices();
  return LogNorm(std::span<const Matrix* const>(weights.data(), weights.size()), floor);
}

}  // namespace hatex
