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

#include "hatex/explain.h"

#include <map>

namespace hatex {

const char* ToString(ExplainMethod method) {
  switch (method) {
    case ExplainMethod::kSa: return "sa";
    case ExplainMethod::kLrp: return "lrp";
    case ExplainMethod::kLoo: return "loo";
  }
  return "?";
}

ExplainMethod ParseExplainMethod(const std::string& name) {
  if (name == "sa") return ExplainMethod::kSa;
  if (name == "lrp") return ExplainMethod::kLrp;
  if (name == "loo") return ExplainMethod::kLoo;
  throw ContractError("unknown explanation method '" + name +
                      "' (expected sa, lrp or loo)");
}

namespace {

void RequireTokenModel(const ModelGraph& model, ExplainMethod method) {
  if (!model.token_input()) {
    throw CapabilityError(std::string(ToString(method)) +
                          " needs a token-sequence model; this model reads "
                          "feature vectors");
  }
}

void CheckTarget(const ModelGraph& model, int target) {
  if (target < 0 || target >= model.num_classes()) {
    throw ContractError("target class " + std::to_string(target) +
                        " out of range");
  }
}

int WindowLength(const ModelGraph& model, const Document& doc) {
  return static_cast<int>(
      std::min<size_t>(doc.tokens.size(), static_cast<size_t>(model.input_length())));
}

RelevanceMap FromRows(const Document& doc, int target, ExplainMethod method,
                      const Matrix& per_coordinate, int window) {
  RelevanceMap map;
  map.doc_id = doc.id;
  map.target_class = target;
  map.method = method;
  for (int t = 0; t < window; ++t) {
    map.tokens.push_back({t, doc.tokens[static_cast<size_t>(t)],
                          per_coordinate.row(t).sum()});
  }
  map.total = per_coordinate.sum();
  return map;
}

}  // namespace

Matrix SaCoordinateRelevance(const ModelGraph& model, const Matrix& input,
                             int target) {
  return model.InputGradient(input, target).array().square().matrix();
}

RelevanceMap SaRelevance(const ModelGraph& model, const Document& doc,
                         int target) {
  RequireTokenModel(model, ExplainMethod::kSa);
  CheckTarget(model, target);
  const Matrix input = model.Embed(model.Encode(doc.tokens));
  return FromRows(doc, target, ExplainMethod::kSa,
                  SaCoordinateRelevance(model, input, target),
                  WindowLength(model, doc));
}

RelevanceMap LrpRelevance(const ModelGraph& model, const Document& doc,
                          int target, const LrpConfig& cfg) {
  RequireTokenModel(model, ExplainMethod::kLrp);
  CheckTarget(model, target);
  const ForwardTrace trace = model.Forward(model.Encode(doc.tokens));
  return FromRows(doc, target, ExplainMethod::kLrp,
                  model.Relevance(trace, target, cfg), WindowLength(model, doc));
}

RelevanceMap LeaveOneOut(const ModelGraph& model, const Document& doc,
                         int target) {
  RequireTokenModel(model, ExplainMethod::kLoo);
  CheckTarget(model, target);
  RelevanceMap map;
  map.doc_id = doc.id;
  map.target_class = target;
  map.method = ExplainMethod::kLoo;
  const Real reference = model.PredictProba(doc.tokens)(target);
  map.reference_probability = reference;
  const int window = WindowLength(model, doc);
  TokenList reduced;
  for (int t = 0; t < window; ++t) {
    reduced.clear();
    for (size_t i = 0; i < doc.tokens.size(); ++i) {
      if (static_cast<int>(i) != t) reduced.push_back(doc.tokens[i]);
    }
    const Real score = reference - model.PredictProba(reduced)(target);
    map.tokens.push_back({t, doc.tokens[static_cast<size_t>(t)], score});
    map.total += score;
  }
  return map;
}

RelevanceMap Explain(const ModelGraph& model, const Document& doc, int target,
                     ExplainMethod method, const LrpConfig& cfg) {
  switch (method) {
    case ExplainMethod::kSa: return SaRelevance(model, doc, target);
    case ExplainMethod::kLrp: return LrpRelevance(model, doc, target, cfg);
    case ExplainMethod::kLoo: return LeaveOneOut(model, doc, target);
  }
  throw ContractError("unknown explanation method");
}

Eigen::MatrixXi TokenIdMatrix(const ModelGraph& model,
                              const LabeledCorpus& corpus) {
  RequireTokenModel(model, ExplainMethod::kLrp);
  Eigen::MatrixXi ids(static_cast<Index>(corpus.size()), model.input_length());
  for (size_t d = 0; d < corpus.size(); ++d) {
    const std::vector<int> row = model.Encode(corpus.documents[d].tokens);
    for (size_t t = 0; t < row.size(); ++t) {
      ids(static_cast<Index>(d), static_cast<Index>(t)) = row[t];
    }
  }
  return ids;
}

PermutationReport PositionImportance(const ModelGraph& model,
                                     const LabeledCorpus& corpus,
                                     int repetitions, uint64_t seed) {
  std::vector<int> labels;
  for (const auto& doc : corpus.documents) labels.push_back(doc.label);
  auto predict = [&model](const Eigen::MatrixXi& ids) {
    std::vector<int> out;
    std::vector<int> row(static_cast<size_t>(ids.cols()));
    for (Index r = 0; r < ids.rows(); ++r) {
      for (Index c = 0; c < ids.cols(); ++c) row[static_cast<size_t>(c)] = ids(r, c);
      Index best = 0;
      model.Forward(row).probs.maxCoeff(&best);
      out.push_back(static_cast<int>(best));
    }
    return out;
  };
  return PermutationImportance(predict, TokenIdMatrix(model, corpus), labels,
                               model.num_classes(), repetitions, seed);
}

std::vector<ClassTerms> GlobalTerms(const ModelGraph& model,
                                    const LabeledCorpus& corpus,
                                    ExplainMethod method, int k,
                                    const LrpConfig& cfg) {
  if (k < 1) throw ContractError("global terms need k >= 1");
  const int num_classes = model.num_classes();
  struct Acc {
    double sum = 0.0;
    int count = 0;
  };
  std::vector<std::map<std::string, Acc>> per_class(static_cast<size_t>(num_classes));
  std::vector<ClassTerms> out(static_cast<size_t>(num_classes));
  for (const auto& doc : corpus.documents) {
    if (doc.empty || doc.tokens.empty()) continue;
    if (model.Predict(doc.tokens) != doc.label) continue;
    const RelevanceMap map = Explain(model, doc, doc.label, method, cfg);
    auto& bucket = per_class[static_cast<size_t>(doc.label)];
    for (const auto& ts : map.tokens) {
      Acc& a = bucket[ts.token];
      a.sum += ts.score;
      ++a.count;
    }
    ++out[static_cast<size_t>(doc.label)].documents;
  }
  for (int c = 0; c < num_classes; ++c) {
    ClassTerms& terms = out[static_cast<size_t>(c)];
    terms.label = c;
    terms.no_correct_predictions = terms.documents == 0;
    std::vector<TermScore> scores;
    for (const auto& [token, acc] : per_class[static_cast<size_t>(c)]) {
      scores.push_back({token, acc.sum / acc.count, acc.count});
    }
    // std::map iteration is lexicographic, so stable sorts break ties by token.
    std::stable_sort(scores.begin(), scores.end(),
                     [](const TermScore& a, const TermScore& b) { return a.mean > b.mean; });
    const size_t n = std::min(scores.size(), static_cast<size_t>(k));
    terms.top.assign(scores.begin(), scores.begin() + static_cast<long>(n));
    std::stable_sort(scores.begin(), scores.end(),
                     [](const TermScore& a, const TermScore& b) { return a.mean < b.mean; });
    terms.bottom.assign(scores.begin(), scores.begin() + static_cast<long>(n));
  }
  return out;
}

}  // namespace hatex
