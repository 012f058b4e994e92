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

#ifndef HATEX_FAITHFULNESS_H_
#define HATEX_FAITHFULNESS_H_

#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hatex/corpus.h"
#include "hatex/explain.h"
#include "hatex/model.h"

namespace hatex {

template <typename M>
concept TokenClassifier = requires(const M& m, const TokenList& tokens) {
  { m.PredictProba(tokens) } -> std::convertible_to<Vector>;
};

struct Rationale {
  enum class Source { kGold, kExtracted };
  std::string doc_id;
  std::vector<int> positions;  // sorted, unique
  Source source = Source::kExtracted;
  double fraction = 0.0;       // |positions| / token count
};

// Top ceil(p * len) tokens by |relevance|, ties going to the earlier
// position; len is the number of scored tokens.
Rationale ExtractRationale(const RelevanceMap& relevance, const Document& doc,
                           double p);

Rationale GoldRationale(const Document& doc);

// `size` distinct positions drawn uniformly from the first `window` tokens.
Rationale RandomRationale(const Document& doc, int window, int size,
                          std::mt19937_64& rng);

// Tokens with the rationale positions deleted, order otherwise kept.
TokenList WithoutRationale(const Document& doc, const Rationale& r);
// Only the rationale tokens, in document order.
TokenList OnlyRationale(const Document& doc, const Rationale& r);

enum class SufficiencyForm {
  kDifference,  // p_c(x) - p_c(r)
  kProduct,     // p_c(x) * p_c(r)
};

template <TokenClassifier M>
double Comprehensiveness(const M& model, const Document& doc,
                         const Rationale& r, int target) {
  const double full = model.PredictProba(doc.tokens)(target);
  return full - model.PredictProba(WithoutRationale(doc, r))(target);
}

template <TokenClassifier M>
double Sufficiency(const M& model, const Document& doc, const Rationale& r,
                   int target,
                   SufficiencyForm form = SufficiencyForm::kDifference) {
  const double full = model.PredictProba(doc.tokens)(target);
  const double alone = model.PredictProba(OnlyRationale(doc, r))(target);
  return form == SufficiencyForm::kDifference ? full - alone : full * alone;
}

// |predicted & gold| / |gold| >= 0.5; nullopt when gold is empty.
std::optional<bool> RationaleMatch(const Rationale& predicted,
                                   const Rationale& gold);

struct DocFaithfulness {
  std::string id;
  int predicted = 0;
  double comprehensiveness = 0.0;
  double sufficiency = 0.0;
  std::optional<bool> match;
};

struct FaithfulnessReport {
  std::string model_id;
  ExplainMethod explainer = ExplainMethod::kLrp;
  double p = 0.2;
  SufficiencyForm form = SufficiencyForm::kDifference;
  std::vector<DocFaithfulness> per_doc;
  double mean_comprehensiveness = 0.0;
  double mean_sufficiency = 0.0;
  std::optional<double> match_rate;  // absent when no document has gold
  int matched = 0;
  int match_denominator = 0;
  int skipped_empty = 0;
};

struct FaithfulnessOptions {
  double p = 0.2;
  SufficiencyForm form = SufficiencyForm::kDifference;
  LrpConfig lrp;
};

FaithfulnessReport ComputeFaithfulness(const ModelGraph& model,
                                       const LabeledCorpus& corpus,
                                       ExplainMethod explainer,
                                       const FaithfulnessOptions& options,
                                       const std::string& model_id);

}  // namespace hatex

#endif  // HATEX_FAITHFULNESS_H_
