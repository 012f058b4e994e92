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

#ifndef HATEX_BASELINES_H_
#define HATEX_BASELINES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hatex/features.h"
#include "hatex/model.h"

namespace hatex {

// Multinomial naive Bayes with add-alpha smoothing over non-negative
// feature rows (counts or TF-IDF weights).
class NaiveBayes {
 public:
  static NaiveBayes Fit(const SparseMatrix& features,
                        const std::vector<int>& labels, int num_classes,
                        double alpha = 1.0);

  int num_classes() const { return static_cast<int>(log_prior_.size()); }
  int num_features() const { return static_cast<int>(log_likelihood_.cols()); }

  // Posterior over classes.
  Vector PredictProba(const SparseVector& x) const;
  int Predict(const SparseVector& x) const;

  const Vector& log_prior() const { return log_prior_; }
  const Matrix& log_likelihood() const { return log_likelihood_; }

  nlohmann::json ToJson() const;
  static NaiveBayes FromJson(const nlohmann::json& j);

 private:
  Vector log_prior_;       // K
  Matrix log_likelihood_;  // K x F
};

// A single Softmax layer over feature rows; the linear baseline.
ModelGraph BuildSoftmaxRegression(int num_features,
                                  const std::vector<std::string>& class_names,
                                  uint64_t seed);

// Mean over weight matrices of log10 ||W||_F^2. Matrices with zero norm
// contribute `floor` instead of -inf.
double LogNorm(std::span<const Matrix* const> weights, double floor = -30.0);
double LogNorm(const ModelGraph& model, double floor = -30.0);

}  // namespace hatex

#endif  // HATEX_BASELINES_H_
