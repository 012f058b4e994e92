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

#ifndef HATEX_HEATMAP_H_
#define HATEX_HEATMAP_H_

#include <string>
#include <vector>

#include "hatex/corpus.h"
#include "hatex/explain.h"

namespace hatex {

// Highlight strength per relevance entry: |R| / max |R|, so the strongest
// token gets exactly 1. All zeros when every score is zero.
std::vector<double> HeatmapOpacities(const RelevanceMap& relevance);

// Self-contained HTML page: positive tokens on a red scale, negative on
// blue, tokens outside the model window left plain.
std::string RenderHeatmap(const Document& doc, const RelevanceMap& relevance,
                          const std::vector<std::string>& class_names);

void WriteHeatmap(const Document& doc, const RelevanceMap& relevance,
                  const std::vector<std::string>& class_names,
                  const std::string& path);

}  // namespace hatex

#endif  // HATEX_HEATMAP_H_
