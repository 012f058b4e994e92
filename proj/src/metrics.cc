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

#include "hatex/metrics.h"

namespace hatex {

ConfusionMatrix::ConfusionMatrix(Eigen::MatrixXi counts)
    : counts_(std::move(counts)) {
  if (counts_.rows() != counts_.cols() || counts_.rows() < 1) {
    throw ContractError("confusion matrix must be square and non-empty");
  }
  if ((counts_.array() < 0).any()) {
    throw ContractError("confusion matrix entries must be non-negative");
  }
}

ConfusionMatrix MakeConfusionMatrix(std::span<const int> gold,
                                    std::span<const int> predicted,
                                    int num_classes) {
  if (gold.size() != predicted.size()) {
    throw ContractError("gold and predicted label lists differ in length (" +
                        std::to_string(gold.size()) + " vs " +
                        std::to_string(predicted.size()) + ")");
  }
  if (num_classes < 1) throw ContractError("need at least one class");
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(num_classes, num_classes);
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes) {
      throw ContractError("label out of range at position " + std::to_string(i));
    }
    ++counts(gold[i], predicted[i]);
  }
  return ConfusionMatrix(std::move(counts));
}

ClassReport ComputeClassReport(const ConfusionMatrix& cm) {
  const auto& m = cm.counts();
  const int k = cm.num_classes();
  ClassReport report;
  for (int c = 0; c < k; ++c) {
    ClassMetrics cls;
    const long tp = m(c, c);
    const long predicted = m.col(c).cast<long>().sum();
    const long actual = m.row(c).cast<long>().sum();
    cls.support = actual;
    if (predicted > 0) {
      cls.precision = static_cast<double>(tp) / static_cast<double>(predicted);
    } else {
      cls.precision_undefined = true;
    }
    if (actual > 0) {
      cls.recall = static_cast<double>(tp) / static_cast<double>(actual);
    } else {
      cls.recall_undefined = true;
    }
    if (cls.precision + cls.recall > 0.0) {
      cls.f1 = 2.0 * cls.precision * cls.recall / (cls.precision + cls.recall);
    } else {
      cls.f1_undefined = true;
    }
    report.macro_precision += cls.precision;
    report.macro_recall += cls.recall;
    report.macro_f1 += cls.f1;
    report.per_class.push_back(cls);
  }
  report.macro_precision /= k;
  report.macro_recall /= k;
  report.macro_f1 /= k;
  const long total = cm.total();
  report.accuracy =
      total > 0 ? static_cast<double>(m.trace()) / static_cast<double>(total) : 0.0;
  return report;
}

double MacroF1(std::span<const int> gold, std::span<const int> predicted,
               int num_classes) {
  return ComputeClassReport(MakeConfusionMatrix(gold, predicted, num_classes))
      .macro_f1;
}

}  // namespace hatex
