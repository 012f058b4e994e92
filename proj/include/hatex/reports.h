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

#ifndef HATEX_REPORTS_H_
#define HATEX_REPORTS_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "hatex/agreement.h"
#include "hatex/explain.h"
#include "hatex/faithfulness.h"
#include "hatex/metrics.h"
#include "hatex/train.h"

namespace hatex {

nlohmann::json MetricsToJson(const ConfusionMatrix& cm,
                             const std::vector<std::string>& class_names);
nlohmann::json RelevanceToJson(const RelevanceMap& rel,
                               const std::vector<std::string>& class_names);
nlohmann::json FaithfulnessToJson(const FaithfulnessReport& report);
nlohmann::json KappaToJson(const KappaReport& report,
                           const std::vector<std::string>& categories);
nlohmann::json PermutationToJson(const PermutationReport& report);
nlohmann::json GlobalTermsToJson(const std::vector<ClassTerms>& terms,
                                 const std::vector<std::string>& class_names,
                                 ExplainMethod method);
nlohmann::json HistoryToJson(const TrainHistory& history);

// Pretty-printed with a trailing newline.
void WriteJson(const nlohmann::json& j, const std::string& path);
nlohmann::json ReadJson(const std::string& path);

}  // namespace hatex

#endif  // HATEX_REPORTS_H_
