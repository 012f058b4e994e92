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

#include "hatex/agreement.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "hatex/csv.h"

namespace hatex {

AnnotationMatrix::AnnotationMatrix(Eigen::MatrixXi counts, int annotators)
    : counts_(std::move(counts)), m_(annotators) {
  if (counts_.rows() < 1) throw ContractError("annotation matrix needs n >= 1");
  if (counts_.cols() < 2) throw ContractError("annotation matrix needs k >= 2");
  if (m_ < 2) throw ContractError("annotation matrix needs m >= 2");
  if ((counts_.array() < 0).any()) {
    throw ContractError("annotation counts must be non-negative");
  }
  for (Index i = 0; i < counts_.rows(); ++i) {
    if (counts_.row(i).sum() != m_) {
      throw ContractError("subject row " + std::to_string(i) +
                          " does not sum to m = " + std::to_string(m_));
    }
  }
}

double CategoryProportion(const AnnotationMatrix& x, int j) {
  if (j < 0 || j >= x.categories()) throw ContractError("category out of range");
  const double n = x.subjects();
  const double m = x.annotators();
  return static_cast<double>(x.counts().col(j).sum()) / (n * m);
}

std::optional<double> CategoryKappa(const AnnotationMatrix& x, int j) {
  const double p = CategoryProportion(x, j);
  if (p <= 0.0 || p >= 1.0) return std::nullopt;
  const double n = x.subjects();
  const double m = x.annotators();
  const Eigen::ArrayXd col = x.counts().col(j).cast<double>().array();
  const double disagreement = (col * (m - col)).sum();
  return 1.0 - disagreement / (n * m * (m - 1.0) * p * (1.0 - p));
}

std::optional<double> OverallKappa(const AnnotationMatrix& x) {
  return ComputeKappaReport(x).overall;
}

KappaReport ComputeKappaReport(const AnnotationMatrix& x) {
  KappaReport report;
  report.p_bar.resize(x.categories());
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < x.categories(); ++j) {
    const double p = CategoryProportion(x, j);
    report.p_bar(j) = p;
    const auto kappa = CategoryKappa(x, j);
    report.kappa.push_back(kappa);
    if (kappa) {
      const double w = p * (1.0 - p);
      num += w * *kappa;
      den += w;
    }
  }
  if (den > 0.0) report.overall = num / den;
  return report;
}

AnnotationSet LoadAnnotations(const std::string& path,
                              const std::vector<std::string>& categories) {
  const CsvTable table = CsvTable::ReadFile(path);
  if (table.rows().empty()) throw FormatError(path + ": no annotations");
  const size_t id_col = table.require_column("id");
  table.require_column("annotator");
  const size_t label_col = table.require_column("label");

  std::vector<std::string> ids;
  std::unordered_map<std::string, size_t> slot;
  std::vector<std::vector<std::string>> votes;
  for (const auto& row : table.rows()) {
    auto [it, fresh] = slot.emplace(row[id_col], ids.size());
    if (fresh) {
      ids.push_back(row[id_col]);
      votes.emplace_back();
    }
    votes[it->second].push_back(row[label_col]);
  }

  std::vector<std::string> cats = categories;
  if (cats.empty()) {
    std::set<std::string> distinct;
    for (const auto& v : votes) distinct.insert(v.begin(), v.end());
    cats.assign(distinct.begin(), distinct.end());
  }
  if (cats.size() < 2) {
    // A single observed label still spans a two-category space.
    throw FormatError(path + ": need at least 2 categories");
  }

  const auto m = votes.front().size();
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(static_cast<Index>(ids.size()),
                                                 static_cast<Index>(cats.size()));
  for (size_t i = 0; i < ids.size(); ++i) {
    if (votes[i].size() != m) {
      throw FormatError("subject '" + ids[i] + "' has " +
                        std::to_string(votes[i].size()) + " votes, expected " +
                        std::to_string(m));
    }
    for (const auto& label : votes[i]) {
      const auto pos = std::find(cats.begin(), cats.end(), label);
      if (pos == cats.end()) {
        throw LabelError("subject '" + ids[i] + "': unknown label '" + label + "'");
      }
      ++counts(static_cast<Index>(i), pos - cats.begin());
    }
  }
  return AnnotationSet{std::move(ids), std::move(cats), std::move(votes),
                       AnnotationMatrix(std::move(counts), static_cast<int>(m))};
}

}  // namespace hatex
