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

#ifndef HATEX_METRICS_H_
#define HATEX_METRICS_H_

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hatex/common.h"

namespace hatex {

// K x K counts; rows are gold labels, columns predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(Eigen::MatrixXi counts);

  const Eigen::MatrixXi& counts() const { return counts_; }
  int num_classes() const { return static_cast<int>(counts_.rows()); }
  long total() const { return counts_.cast<long>().sum(); }

 private:
  Eigen::MatrixXi counts_;
};

ConfusionMatrix MakeConfusionMatrix(std::span<const int> gold,
                                    std::span<const int> predicted,
                                    int num_classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
  // Zero denominators; the metric is then reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct ClassReport {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

ClassReport ComputeClassReport(const ConfusionMatrix& cm);

struct MccResult {
  double value = 0.0;
  bool degenerate = false;  // zero denominator, value forced to 0
};

// Multiclass Matthews correlation over any square count matrix:
//   (c s - sum_k p_k t_k) / sqrt((s^2 - sum p_k^2)(s^2 - sum t_k^2))
// with c correct predictions, s the total, p_k / t_k predicted / true counts.
template <typename Derived>
MccResult Mcc(const Eigen::MatrixBase<Derived>& counts) {
  const Eigen::MatrixXd cm = counts.template cast<double>();
  const double s = cm.sum();
  const double c = cm.trace();
  const Eigen::VectorXd t = cm.rowwise().sum();
  const Eigen::VectorXd p = cm.colwise().sum().transpose();
  const double cov = c * s - p.dot(t);
  const double den = (s * s - p.squaredNorm()) * (s * s - t.squaredNorm());
  if (!(den > 0.0)) return {0.0, true};
  return {cov / std::sqrt(den), false};
}

inline MccResult Mcc(const ConfusionMatrix& cm) { return Mcc(cm.counts()); }

double MacroF1(std::span<const int> gold, std::span<const int> predicted,
               int num_classes);

}  // namespace hatex

#endif  // HATEX_METRICS_H_
