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

#ifndef HATEX_CHECKPOINT_H_
#define HATEX_CHECKPOINT_H_

#include <string>

#include <json.hpp>

#include "hatex/model.h"

namespace hatex {

inline constexpr int kCheckpointVersion = 1;

// Structured-text checkpoint: input spec, class names, vocabulary, layer
// specs, then every parameter as {rows, cols, data} in row-major order.
// Doubles are written in shortest round-trip form, so a reloaded model
// reproduces outputs bit for bit.
nlohmann::json ModelToJson(const ModelGraph& model);
ModelGraph ModelFromJson(const nlohmann::json& j);

void SaveModel(const ModelGraph& model, const std::string& path);
ModelGraph LoadModel(const std::string& path);

nlohmann::json LayerSpecToJson(const LayerSpec& spec);
LayerSpec LayerSpecFromJson(const nlohmann::json& j);

}  // namespace hatex

#endif  // HATEX_CHECKPOINT_H_
