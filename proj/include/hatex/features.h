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

#ifndef HATEX_FEATURES_H_
#define HATEX_FEATURES_H_

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "hatex/common.h"
#include "hatex/corpus.h"

namespace hatex {

// Token <-> index map with reserved pad (0) and unknown (1) entries.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary();
  // Builds from ordered non-special tokens.
  explicit Vocabulary(const std::vector<std::string>& tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  int index(const std::string& token) const;
  const std::string& token(int index) const { return tokens_.at(static_cast<size_t>(index)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Token ids truncated/padded to `max_len`.
  std::vector<int> Encode(const TokenList& tokens, int max_len) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Keeps the `max_size` most frequent tokens (ties broken lexicographically)
// plus the two specials.
Vocabulary BuildVocabulary(const LabeledCorpus& corpus, int max_size);

struct TfIdfOptions {
  int char_ngram_lo = 2;
  int char_ngram_hi = 5;
  bool use_word_unigrams = true;
};

using SparseVector = Eigen::SparseVector<Real>;
using SparseMatrix = Eigen::SparseMatrix<Real, Eigen::RowMajor>;

class TfIdfModel {
 public:
  TfIdfModel() = default;
  TfIdfModel(TfIdfOptions options, std::vector<std::string> features,
             std::vector<int> df, int num_docs);

  const TfIdfOptions& options() const { return options_; }
  int num_features() const { return static_cast<int>(features_.size()); }
  int num_docs() const { return num_docs_; }
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<int>& document_frequency() const { return df_; }
  // -1 when unseen.
  int feature_index(const std::string& key) const;
  // ln((1 + N) / (1 + df)) + 1
  Real idf(int feature) const;

 private:
  TfIdfOptions options_;
  std::vector<std::string> features_;  // sorted keys
  std::vector<int> df_;
  int num_docs_ = 0;
  std::unordered_map<std::string, int> index_;
};

// Raw feature counts of one token list: keys "w:<token>" for word unigrams
// and "c:<ngram>" for character n-grams of the space-joined text.
std::unordered_map<std::string, int> ExtractFeatureCounts(
    const TokenList& tokens, const TfIdfOptions& options);

TfIdfModel FitTfIdf(const LabeledCorpus& corpus, const TfIdfOptions& options);

// tf * idf, L2-normalised; unseen features are dropped. A document without
// known features maps to the zero vector.
SparseVector TransformTfIdf(const TfIdfModel& model, const Document& doc);

// One row per document.
SparseMatrix TransformTfIdf(const TfIdfModel& model, const LabeledCorpus& corpus);

enum class UnknownPolicy { kZeros, kMean };

class EmbeddingTable {
 public:
  EmbeddingTable(int dim, UnknownPolicy policy = UnknownPolicy::kZeros);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(vectors_.size()); }
  void Add(const std::string& token, const Vector& vec);
  bool Contains(const std::string& token) const;
  // Stored vector, or the fallback for unknown tokens. The pad token is
  // always zero.
  Vector Lookup(const std::string& token) const;
  void set_policy(UnknownPolicy policy) { policy_ = policy; }

 private:
  int dim_;
  UnknownPolicy policy_;
  std::unordered_map<std::string, Vector> vectors_;
  Vector sum_;
};

// Text vector format: "<count> <dim>" header then "<token> f1 ... fdim".
EmbeddingTable LoadEmbeddingTable(const std::string& path,
                                  UnknownPolicy policy = UnknownPolicy::kZeros);

// len x D matrix whose row t embeds tokens[t].
Matrix EmbedSequence(const TokenList& tokens, const EmbeddingTable& table);

}  // namespace hatex

#endif  // HATEX_FEATURES_H_
