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

#include "hatex/reports.h"

#include <fstream>

namespace hatex {

namespace {

template <typename T>
nlohmann::json OrNull(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string ClassName(const std::vector<std::string>& names, int c) {
  return c >= 0 && static_cast<size_t>(c) < names.size() ? names[static_cast<size_t>(c)]
                                                         : std::to_string(c);
}

}  // namespace

nlohmann::json MetricsToJson(const ConfusionMatrix& cm,
                             const std::vector<std::string>& class_names) {
  const ClassReport report = ComputeClassReport(cm);
  const MccResult mcc = Mcc(cm);
  nlohmann::json j;
  nlohmann::json per_class = nlohmann::json::array();
  for (size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    nlohmann::json row = {{"class", ClassName(class_names, static_cast<int>(c))},
                          {"precision", m.precision},
                          {"recall", m.recall},
                          {"f1", m.f1},
                          {"support", m.support}};
    nlohmann::json undefined = nlohmann::json::array();
    if (m.precision_undefined) undefined.push_back("precision");
    if (m.recall_undefined) undefined.push_back("recall");
    if (m.f1_undefined) undefined.push_back("f1");
    if (!undefined.empty()) row["undefined"] = undefined;
    per_class.push_back(row);
  }
  j["per_class"] = per_class;
  j["macro_precision"] = report.macro_precision;
  j["macro_recall"] = report.macro_recall;
  j["macro_f1"] = report.macro_f1;
  j["accuracy"] = report.accuracy;
  j["mcc"] = mcc.value;
  j["mcc_degenerate"] = mcc.degenerate;
  nlohmann::json confusion = nlohmann::json::array();
  for (Index r = 0; r < cm.counts().rows(); ++r) {
    std::vector<int> row;
    for (Index c = 0; c < cm.counts().cols(); ++c) row.push_back(cm.counts()(r, c));
    confusion.push_back(row);
  }
  j["confusion"] = confusion;
  return j;
}

nlohmann::json RelevanceToJson(const RelevanceMap& rel,
                               const std::vector<std::string>& class_names) {
  nlohmann::json tokens = nlohmann::json::array();
  for (const auto& t : rel.tokens) {
    tokens.push_back({{"pos", t.pos}, {"token", t.token}, {"score", t.score}});
  }
  nlohmann::json j = {{"doc_id", rel.doc_id},
                      {"class", ClassName(class_names, rel.target_class)},
                      {"method", ToString(rel.method)},
                      {"tokens", tokens},
                      {"total", rel.total}};
  if (rel.reference_probability) j["reference_probability"] = *rel.reference_probability;
  return j;
}

nlohmann::json FaithfulnessToJson(const FaithfulnessReport& report) {
  nlohmann::json per_doc = nlohmann::json::array();
  for (const auto& d : report.per_doc) {
    per_doc.push_back({{"id", d.id},
                       {"predicted", d.predicted},
                       {"e", d.comprehensiveness},
                       {"s", d.sufficiency},
                       {"match", OrNull(d.match)}});
  }
  return {{"model", report.model_id},
          {"explainer", ToString(report.explainer)},
          {"p", report.p},
          {"sufficiency_form",
           report.form == SufficiencyForm::kDifference ? "difference" : "product"},
          {"per_doc", per_doc},
          {"mean_e", report.mean_comprehensiveness},
          {"mean_s", report.mean_sufficiency},
          {"match_rate", OrNull(report.match_rate)},
          {"matched", report.matched},
          {"match_denominator", report.match_denominator},
          {"skipped_empty", report.skipped_empty}};
}

nlohmann::json KappaToJson(const KappaReport& report,
                           const std::vector<std::string>& categories) {
  nlohmann::json per = nlohmann::json::array();
  for (Index j = 0; j < report.p_bar.size(); ++j) {
    per.push_back({{"category", ClassName(categories, static_cast<int>(j))},
                   {"p_bar", report.p_bar(j)},
                   {"kappa", OrNull(report.kappa[static_cast<size_t>(j)])}});
  }
  return {{"categories", per}, {"overall", OrNull(report.overall)}};
}

nlohmann::json PermutationToJson(const PermutationReport& report) {
  return {{"reference_macro_f1", report.reference_score},
          {"importance", report.importance},
          {"repetitions", report.repetitions},
          {"seed", report.seed}};
}

nlohmann::json GlobalTermsToJson(const std::vector<ClassTerms>& terms,
                                 const std::vector<std::string>& class_names,
                                 ExplainMethod method) {
  auto list = [](const std::vector<TermScore>& scores) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : scores) {
      a.push_back({{"token", s.token}, {"mean", s.mean}, {"count", s.count}});
    }
    return a;
  };
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& t : terms) {
    classes.push_back({{"class", ClassName(class_names, t.label)},
                       {"documents", t.documents},
                       {"no_correct_predictions", t.no_correct_predictions},
                       {"top", list(t.top)},
                       {"bottom", list(t.bottom)}});
  }
  return {{"method", ToString(method)}, {"classes", classes}};
}

nlohmann::json HistoryToJson(const TrainHistory& history) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : history.epochs) {
    a.push_back({{"epoch", e.epoch}, {"loss", e.loss}, {"macro_f1", e.macro_f1}});
  }
  return a;
}

void WriteJson(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace hatex
