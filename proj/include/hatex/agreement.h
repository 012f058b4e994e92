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

#ifndef HATEX_AGREEMENT_H_
#define HATEX_AGREEMENT_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hatex/common.h"

namespace hatex {

// n subjects x k categories; x(i, j) annotators who put subject i in
// category j. Every row sums to the annotator count m.
class AnnotationMatrix {
 public:
  AnnotationMatrix(Eigen::MatrixXi counts, int annotators);

  const Eigen::MatrixXi& counts() const { return counts_; }
  int subjects() const { return static_cast<int>(counts_.rows()); }
  int categories() const { return static_cast<int>(counts_.cols()); }
  int annotators() const { return m_; }

 private:
  Eigen::MatrixXi counts_;
  int m_;
};

struct KappaReport {
  Vector p_bar;
  std::vector<std::optional<double>> kappa;  // nullopt for degenerate p_bar
  std::optional<double> overall;
};

// Share of all n*m votes that went to category j.
double CategoryProportion(const AnnotationMatrix& x, int j);

// Chance-corrected agreement on category j. nullopt when p_bar_j is 0 or 1.
std::optional<double> CategoryKappa(const AnnotationMatrix& x, int j);

// p_bar_j (1 - p_bar_j)-weighted mean of the defined category kappas.
// nullopt when every category is degenerate.
std::optional<double> OverallKappa(const AnnotationMatrix& x);

KappaReport ComputeKappaReport(const AnnotationMatrix& x);

// Strict-majority label, or nullopt (undecided) when no label has more than
// half of the votes.
template <typename Label>
std::optional<Label> MajorityLabel(std::span<const Label> votes) {
  if (votes.size() < 2) throw ContractError("majority needs at least 2 votes");
  std::map<Label, size_t> tally;
  for (const auto& v : votes) ++tally[v];
  for (const auto& [label, count] : tally) {
    if (2 * count > votes.size()) return label;
  }
  return std::nullopt;
}

struct AnnotationSet {
  std::vector<std::string> subject_ids;  // first-appearance order
  std::vector<std::string> categories;
  std::vector<std::vector<std::string>> votes;  // per subject
  AnnotationMatrix matrix;
};

// Reads id,annotator,label rows and pivots them into counts. Every subject
// must carry the same number of votes. `categories` fixes the column order;
// otherwise the sorted distinct labels are used.
AnnotationSet LoadAnnotations(const std::string& path,
                              const std::vector<std::string>& categories = {});

}  // namespace hatex

#endif  // HATEX_AGREEMENT_H_
