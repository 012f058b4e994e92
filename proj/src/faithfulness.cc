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

#include "hatex/faithfulness.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hatex {

namespace {

double Fraction(size_t selected, size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(selected) / static_cast<double>(total);
}

}  // namespace

Rationale ExtractRationale(const RelevanceMap& relevance, const Document& doc,
                           double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ContractError("rationale fraction must be in (0, 1], got " +
                        std::to_string(p));
  }
  if (relevance.doc_id != doc.id) {
    throw ContractError("relevance map belongs to '" + relevance.doc_id +
                        "', not '" + doc.id + "'");
  }
  const size_t len = relevance.tokens.size();
  // Guard against p * len landing a hair above an integer (0.3 * 10).
  const size_t keep = std::min(
      len, static_cast<size_t>(std::ceil(p * static_cast<double>(len) - 1e-9)));
  std::vector<size_t> order(len);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double sa = std::abs(relevance.tokens[a].score);
    const double sb = std::abs(relevance.tokens[b].score);
    if (sa != sb) return sa > sb;
    return relevance.tokens[a].pos < relevance.tokens[b].pos;
  });
  Rationale r;
  r.doc_id = doc.id;
  r.source = Rationale::Source::kExtracted;
  for (size_t i = 0; i < keep; ++i) r.positions.push_back(relevance.tokens[order[i]].pos);
  std::sort(r.positions.begin(), r.positions.end());
  r.fraction = Fraction(r.positions.size(), doc.tokens.size());
  return r;
}

Rationale GoldRationale(const Document& doc) {
  Rationale r;
  r.doc_id = doc.id;
  r.source = Rationale::Source::kGold;
  if (doc.gold_rationale) r.positions = *doc.gold_rationale;
  r.fraction = Fraction(r.positions.size(), doc.tokens.size());
  return r;
}

Rationale RandomRationale(const Document& doc, int window, int size,
                          std::mt19937_64& rng) {
  const int n = std::min<int>(window, static_cast<int>(doc.tokens.size()));
  if (size < 0 || size > n) throw ContractError("random rationale size out of range");
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::shuffle(pool.begin(), pool.end(), rng);
  Rationale r;
  r.doc_id = doc.id;
  r.positions.assign(pool.begin(), pool.begin() + size);
  std::sort(r.positions.begin(), r.positions.end());
  r.fraction = Fraction(r.positions.size(), doc.tokens.size());
  return r;
}

TokenList WithoutRationale(const Document& doc, const Rationale& r) {
  TokenList out;
  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    if (!std::binary_search(r.positions.begin(), r.positions.end(), static_cast<int>(i))) {
      out.push_back(doc.tokens[i]);
    }
  }
  return out;
}

TokenList OnlyRationale(const Document& doc, const Rationale& r) {
  TokenList out;
  for (int pos : r.positions) {
    if (pos < 0 || static_cast<size_t>(pos) >= doc.tokens.size()) {
      throw ContractError("rationale position " + std::to_string(pos) +
                          " outside document '" + doc.id + "'");
    }
    out.push_back(doc.tokens[static_cast<size_t>(pos)]);
  }
  return out;
}

std::optional<bool> RationaleMatch(const Rationale& predicted,
                                   const Rationale& gold) {
  if (predicted.doc_id != gold.doc_id) {
    throw ContractError("rationales belong to different documents");
  }
  if (gold.positions.empty()) return std::nullopt;
  std::vector<int> common;
  std::set_intersection(predicted.positions.begin(), predicted.positions.end(),
                        gold.positions.begin(), gold.positions.end(),
                        std::back_inserter(common));
  // 2|common| >= |gold| is the 0.5 threshold without rounding.
  return 2 * common.size() >= gold.positions.size();
}

FaithfulnessReport ComputeFaithfulness(const ModelGraph& model,
                                       const LabeledCorpus& corpus,
                                       ExplainMethod explainer,
                                       const FaithfulnessOptions& options,
                                       const std::string& model_id) {
  FaithfulnessReport report;
  report.model_id = model_id;
  report.explainer = explainer;
  report.p = options.p;
  report.form = options.form;
  double sum_e = 0.0;
  double sum_s = 0.0;
  for (const auto& doc : corpus.documents) {
    if (doc.empty || doc.tokens.empty()) {
      ++report.skipped_empty;
      continue;
    }
    DocFaithfulness d;
    d.id = doc.id;
    d.predicted = model.Predict(doc.tokens);
    const RelevanceMap rel = Explain(model, doc, d.predicted, explainer, options.lrp);
    const Rationale r = ExtractRationale(rel, doc, options.p);
    d.comprehensiveness = Comprehensiveness(model, doc, r, d.predicted);
    d.sufficiency = Sufficiency(model, doc, r, d.predicted, options.form);
    if (doc.gold_rationale) {
      d.match = RationaleMatch(r, GoldRationale(doc));
      if (d.match) {
        ++report.match_denominator;
        if (*d.match) ++report.matched;
      }
    }
    sum_e += d.comprehensiveness;
    sum_s += d.sufficiency;
    report.per_doc.push_back(std::move(d));
  }
  if (!report.per_doc.empty()) {
    report.mean_comprehensiveness = sum_e / static_cast<double>(report.per_doc.size());
    report.mean_sufficiency = sum_s / static_cast<double>(report.per_doc.size());
  }
  if (report.match_denominator > 0) {
    report.match_rate = static_cast<double>(report.matched) / report.match_denominator;
  }
  return report;
}

}  // namespace hatex
