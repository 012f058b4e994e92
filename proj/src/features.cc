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

#include "hatex/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <unicode/utf8.h>

namespace hatex {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string>& tokens) {
  tokens_.emplace_back(kPadToken);
  tokens_.emplace_back(kUnkToken);
  tokens_.insert(tokens_.end(), tokens.begin(), tokens.end());
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw ContractError("vocabulary token '" + tokens_[i] + "' repeated");
    }
  }
}

int Vocabulary::index(const std::string& token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::Encode(const TokenList& tokens, int max_len) const {
  std::vector<int> ids(static_cast<size_t>(max_len), kPad);
  const size_t n = std::min(tokens.size(), ids.size());
  for (size_t i = 0; i < n; ++i) ids[i] = index(tokens[i]);
  return ids;
}

Vocabulary BuildVocabulary(const LabeledCorpus& corpus, int max_size) {
  if (corpus.documents.empty()) throw ContractError("vocabulary: empty corpus");
  if (max_size < 0) throw ContractError("vocabulary: negative max_size");
  std::unordered_map<std::string, long> freq;
  for (const auto& doc : corpus.documents) {
    for (const auto& t : doc.tokens) ++freq[t];
  }
  freq.erase(std::string(kPadToken));
  freq.erase(std::string(kUnkToken));
  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > static_cast<size_t>(max_size)) {
    ranked.resize(static_cast<size_t>(max_size));
  }
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [token, count] : ranked) tokens.push_back(token);
  return Vocabulary(tokens);
}

TfIdfModel::TfIdfModel(TfIdfOptions options, std::vector<std::string> features,
                       std::vector<int> df, int num_docs)
    : options_(options),
      features_(std::move(features)),
      df_(std::move(df)),
      num_docs_(num_docs) {
  if (features_.size() != df_.size()) {
    throw ContractError("tf-idf: feature and df lengths differ");
  }
  for (size_t i = 0; i < features_.size(); ++i) {
    if (df_[i] < 1 || df_[i] > num_docs_) {
      throw ContractError("tf-idf: df out of range for '" + features_[i] + "'");
    }
    index_.emplace(features_[i], static_cast<int>(i));
  }
}

int TfIdfModel::feature_index(const std::string& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

Real TfIdfModel::idf(int feature) const {
  return std::log((1.0 + num_docs_) /
                  (1.0 + df_[static_cast<size_t>(feature)])) + 1.0;
}

std::unordered_map<std::string, int> ExtractFeatureCounts(
    const TokenList& tokens, const TfIdfOptions& options) {
  if (options.char_ngram_lo < 1 || options.char_ngram_lo > options.char_ngram_hi) {
    throw ContractError("tf-idf: need 1 <= lo <= hi for char n-grams");
  }
  std::unordered_map<std::string, int> counts;
  if (options.use_word_unigrams) {
    for (const auto& t : tokens) ++counts["w:" + t];
  }
  const std::string text = JoinTokens(tokens);
  // Code point boundaries of the joined text.
  std::vector<int32_t> starts;
  int32_t i = 0;
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    starts.push_back(i);
    U8_FWD_1(text.data(), i, n);
  }
  starts.push_back(n);
  const auto points = starts.size() - 1;
  for (int len = options.char_ngram_lo; len <= options.char_ngram_hi; ++len) {
    const auto width = static_cast<size_t>(len);
    for (size_t s = 0; s + width <= points; ++s) {
      const auto from = static_cast<size_t>(starts[s]);
      const auto to = static_cast<size_t>(starts[s + width]);
      ++counts["c:" + text.substr(from, to - from)];
    }
  }
  return counts;
}

TfIdfModel FitTfIdf(const LabeledCorpus& corpus, const TfIdfOptions& options) {
  std::map<std::string, int> df;
  for (const auto& doc : corpus.documents) {
    for (const auto& [key, count] : ExtractFeatureCounts(doc.tokens, options)) {
      ++df[key];
    }
  }
  std::vector<std::string> features;
  std::vector<int> counts;
  for (auto& [key, value] : df) {
    features.push_back(key);
    counts.push_back(value);
  }
  return TfIdfModel(options, std::move(features), std::move(counts),
                    static_cast<int>(corpus.size()));
}

SparseVector TransformTfIdf(const TfIdfModel& model, const Document& doc) {
  std::vector<std::pair<int, Real>> entries;
  for (const auto& [key, tf] : ExtractFeatureCounts(doc.tokens, model.options())) {
    const int f = model.feature_index(key);
    if (f >= 0) entries.emplace_back(f, tf * model.idf(f));
  }
  std::sort(entries.begin(), entries.end());
  SparseVector v(model.num_features());
  v.reserve(static_cast<Index>(entries.size()));
  Real norm2 = 0.0;
  for (const auto& [f, w] : entries) norm2 += w * w;
  const Real scale = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 1.0;
  for (const auto& [f, w] : entries) v.insertBack(f) = w * scale;
  return v;
}

SparseMatrix TransformTfIdf(const TfIdfModel& model, const LabeledCorpus& corpus) {
  std::vector<Eigen::Triplet<Real>> triplets;
  for (size_t r = 0; r < corpus.size(); ++r) {
    const SparseVector v = TransformTfIdf(model, corpus.documents[r]);
    for (SparseVector::InnerIterator it(v); it; ++it) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(it.index()),
                            it.value());
    }
  }
  SparseMatrix m(static_cast<Index>(corpus.size()), model.num_features());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

EmbeddingTable::EmbeddingTable(int dim, UnknownPolicy policy)
    : dim_(dim), policy_(policy), sum_(Vector::Zero(dim > 0 ? dim : 0)) {
  if (dim <= 0) throw ContractError("embedding dimension must be positive");
}

void EmbeddingTable::Add(const std::string& token, const Vector& vec) {
  if (vec.size() != dim_) throw ContractError("embedding vector has wrong length");
  if (!vectors_.emplace(token, vec).second) throw ContractError("embedding token '" + token + "' repeated");
  sum_ += vec;
}

bool EmbeddingTable::Contains(const std::string& token) const {
  return vectors_.count(token) > 0;
}

Vector EmbeddingTable::Lookup(const std::string& token) const {
  if (token == kPadToken) return Vector::Zero(dim_);
  const auto it = vectors_.find(token);
  if (it != vectors_.end()) return it->second;
  if (policy_ == UnknownPolicy::kMean && !vectors_.empty()) {
    return sum_ / static_cast<Real>(vectors_.size());
  }
  return Vector::Zero(dim_);
}

EmbeddingTable LoadEmbeddingTable(const std::string& path, UnknownPolicy policy) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ":1: missing header");
  long count = 0;
  int dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> count >> dim) || count < 0 || dim <= 0) {
      throw FormatError(path + ":1: header must be '<count> <dim>'");
    }
  }
  EmbeddingTable table(dim, policy);
  long line_no = 1;
  long rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    std::vector<Real> values;
    std::string field;
    while (ss >> field) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0') {
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": bad number '" + field + "'");
      }
      values.push_back(v);
    }
    if (values.size() != static_cast<size_t>(dim)) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(dim) + " values, got " +
                        std::to_string(values.size()));
    }
    try {
      table.Add(token, Eigen::Map<const Vector>(values.data(), dim));
    } catch (const ContractError& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    ++rows;
  }
  if (rows != count) {
    throw FormatError(path + ": header declares " + std::to_string(count) +
                      " vectors, found " + std::to_string(rows));
  }
  return table;
}

Matrix EmbedSequence(const TokenList& tokens, const EmbeddingTable& table) {
  Matrix out(static_cast<Index>(tokens.size()), table.dim());
  for (size_t t = 0; t < tokens.size(); ++t) {
    out.row(static_cast<Index>(t)) = table.Lookup(tokens[t]).transpose();
  }
  return out;
}

}  // namespace hatex
