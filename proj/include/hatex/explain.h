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

#ifndef HATEX_EXPLAIN_H_
#define HATEX_EXPLAIN_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hatex/corpus.h"
#include "hatex/lrp_rules.h"
#include "hatex/metrics.h"
#include "hatex/model.h"

namespace hatex {

enum class ExplainMethod { kSa, kLrp, kLoo };

const char* ToString(ExplainMethod method);
ExplainMethod ParseExplainMethod(const std::string& name);

struct TokenScore {
  int pos = 0;
  std::string token;
  Real score = 0.0;
};

// Per-token attribution for one document and one target class. Only real
// (non-pad) tokens inside the model window appear.
struct RelevanceMap {
  std::string doc_id;
  int target_class = 0;
  ExplainMethod method = ExplainMethod::kLrp;
  std::vector<TokenScore> tokens;
  Real total = 0.0;
  // Leave-one-out only: p_c of the unmodified document.
  std::optional<Real> reference_probability;
};

// Squared partial derivatives of f_c for every embedded input coordinate.
Matrix SaCoordinateRelevance(const ModelGraph& model, const Matrix& input,
                             int target);

// Token score = sum of squared partials over its embedding coordinates;
// total = ||grad f_c||^2 over the whole input.
RelevanceMap SaRelevance(const ModelGraph& model, const Document& doc,
                         int target);

// Token score = LRP relevance summed over its embedding coordinates.
RelevanceMap LrpRelevance(const ModelGraph& model, const Document& doc,
                          int target, const LrpConfig& cfg = {});

// Token score = p_c(doc) - p_c(doc without that token).
RelevanceMap LeaveOneOut(const ModelGraph& model, const Document& doc,
                         int target);

RelevanceMap Explain(const ModelGraph& model, const Document& doc, int target,
                     ExplainMethod method, const LrpConfig& cfg = {});

struct PermutationReport {
  double reference_score = 0.0;     // macro-F1 on the unshuffled data
  std::vector<double> importance;   // one entry per feature column
  int repetitions = 0;
  uint64_t seed = 0;
};

// Mean macro-F1 drop when one feature column is shuffled across rows:
//   sigma_i = s - (1/R) sum_r s_{r,i}
// evaluated as the mean of (s - s_{r,i}) so an ignored feature scores 0
// exactly. One generator seeded with `seed` supplies the permutations in
// feature-major, repetition-minor order. `predict` maps a feature matrix
// (one row per example) to predicted labels.
template <typename Scalar, typename PredictFn>
PermutationReport PermutationImportance(
    PredictFn&& predict,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& features,
    std::span<const int> labels, int num_classes, int repetitions,
    uint64_t seed) {
  if (repetitions < 1) throw ContractError("permutation importance needs R >= 1");
  if (features.rows() < 2) throw ContractError("permutation importance needs >= 2 rows");
  if (static_cast<size_t>(features.rows()) != labels.size()) {
    throw ContractError("feature rows and labels differ in length");
  }
  PermutationReport report;
  report.repetitions = repetitions;
  report.seed = seed;
  const std::vector<int> base = predict(features);
  report.reference_score = MacroF1(labels, base, num_classes);
  std::mt19937_64 rng(seed);
  std::vector<Index> order(static_cast<size_t>(features.rows()));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> corrupted = features;
  for (Index col = 0; col < features.cols(); ++col) {
    double drop = 0.0;
    for (int r = 0; r < repetitions; ++r) {
      for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
      std::shuffle(order.begin(), order.end(), rng);
      for (Index row = 0; row < features.rows(); ++row) {
        corrupted(row, col) = features(order[static_cast<size_t>(row)], col);
      }
      const std::vector<int> shuffled = predict(corrupted);
      drop += report.reference_score - MacroF1(labels, shuffled, num_classes);
    }
    corrupted.col(col) = features.col(col);
    report.importance.push_back(drop / repetitions);
  }
  return report;
}

// Token-id matrix (documents x max_len) of a corpus, for permuting token
// positions of sequence models.
Eigen::MatrixXi TokenIdMatrix(const ModelGraph& model, const LabeledCorpus& corpus);

// Permutation importance of token positions for a sequence model.
PermutationReport PositionImportance(const ModelGraph& model,
                                     const LabeledCorpus& corpus,
                                     int repetitions, uint64_t seed);

struct TermScore {
  std::string token;
  double mean = 0.0;  // mean relevance over occurrences
  int count = 0;
};

struct ClassTerms {
  int label = 0;
  bool no_correct_predictions = false;
  int documents = 0;  // correctly classified documents that contributed
  std::vector<TermScore> top;     // most relevant first
  std::vector<TermScore> bottom;  // least relevant first
};

// Per class, mean per-token relevance over correctly classified documents of
// that class, aggregated by token type.
std::vector<ClassTerms> GlobalTerms(const ModelGraph& model,
                                    const LabeledCorpus& corpus,
                                    ExplainMethod method, int k,
                                    const LrpConfig& cfg = {});

}  // namespace hatex

#endif  // HATEX_EXPLAIN_H_
