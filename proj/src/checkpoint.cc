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

#include "hatex/checkpoint.h"

#include <fstream>

namespace hatex {

using nlohmann::json;

json LayerSpecToJson(const LayerSpec& spec) {
  return {{"kind", ToString(spec.kind)},
          {"units", spec.units},
          {"width", spec.width},
          {"pool", spec.pool},
          {"rate", spec.rate},
          {"activation", ToString(spec.activation)},
          {"return_sequences", spec.return_sequences}};
}

LayerSpec LayerSpecFromJson(const json& j) {
  LayerSpec spec;
  spec.kind = ParseLayerKind(j.at("kind").get<std::string>());
  spec.units = j.at("units").get<int>();
  spec.width = j.at("width").get<int>();
  spec.pool = j.at("pool").get<int>();
  spec.rate = j.at("rate").get<double>();
  spec.activation = ParseActivation(j.at("activation").get<std::string>());
  spec.return_sequences = j.at("return_sequences").get<bool>();
  return spec;
}

json ModelToJson(const ModelGraph& model) {
  json layers = json::array();
  for (const auto& ls : model.spec().layers) layers.push_back(LayerSpecToJson(ls));
  json params = json::array();
  for (const Matrix* p : model.Parameters()) {
    std::vector<double> data;
    data.reserve(static_cast<size_t>(p->size()));
    for (Index r = 0; r < p->rows(); ++r) {
      for (Index c = 0; c < p->cols(); ++c) data.push_back((*p)(r, c));
    }
    params.push_back({{"rows", p->rows()}, {"cols", p->cols()}, {"data", data}});
  }
  std::vector<std::string> vocab(model.vocab().tokens().begin() + 2,
                                 model.vocab().tokens().end());
  return {{"format", "hatex-model"},
          {"version", kCheckpointVersion},
          {"input",
           {{"kind", model.token_input() ? "tokens" : "features"},
            {"length", model.input_length()}}},
          {"classes", model.class_names()},
          {"vocab", vocab},
          {"layers", layers},
          {"params", params}};
}

ModelGraph ModelFromJson(const json& j) {
  try {
    if (j.at("format") != "hatex-model") throw FormatError("not a hatex model");
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version " +
                        j.at("version").dump());
    }
    ModelSpec spec;
    const std::string kind = j.at("input").at("kind").get<std::string>();
    if (kind != "tokens" && kind != "features") {
      throw FormatError("unknown input kind '" + kind + "'");
    }
    spec.input.kind =
        kind == "tokens" ? InputSpec::Kind::kTokens : InputSpec::Kind::kFeatures;
    spec.input.length = j.at("input").at("length").get<int>();
    for (const auto& l : j.at("layers")) spec.layers.push_back(LayerSpecFromJson(l));
    ModelGraph model(spec,
                     Vocabulary(j.at("vocab").get<std::vector<std::string>>()),
                     j.at("classes").get<std::vector<std::string>>(), 0);
    auto params = model.Parameters();
    const auto& stored = j.at("params");
    if (stored.size() != params.size()) {
      throw FormatError("checkpoint has " + std::to_string(stored.size()) +
                        " parameter tensors, architecture needs " +
                        std::to_string(params.size()));
    }
    for (size_t k = 0; k < params.size(); ++k) {
      Matrix& p = *params[k];
      const auto rows = stored[k].at("rows").get<Index>();
      const auto cols = stored[k].at("cols").get<Index>();
      const auto& data = stored[k].at("data");
      if (rows != p.rows() || cols != p.cols() ||
          data.size() != static_cast<size_t>(rows * cols)) {
        throw FormatError("parameter " + std::to_string(k) + " has shape " +
                          std::to_string(rows) + "x" + std::to_string(cols) +
                          ", expected " + std::to_string(p.rows()) + "x" +
                          std::to_string(p.cols()));
      }
      size_t at = 0;
      for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) p(r, c) = data[at++].get<double>();
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed checkpoint: ") + e.what());
  } catch (const BuildError& e) {
    throw FormatError(std::string("checkpoint architecture invalid: ") + e.what());
  }
}

void SaveModel(const ModelGraph& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << ModelToJson(model).dump() << '\n';
}

ModelGraph LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return ModelFromJson(j);
}

}  // namespace hatex
