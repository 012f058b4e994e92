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

#ifndef HATEX_TOOLS_CLI_CONFIG_H_
#define HATEX_TOOLS_CLI_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hatex/common.h"

namespace hatex::cli {

// Bad flags or config; maps to exit status 2.
class UsageError : public Error {
 public:
  explicit UsageError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct RunConfig {
  struct Data {
    std::string corpus;
    std::string train;
    std::string test;
    std::string annotations;
    std::string id_column = "id";
    std::string text_column = "text";
    std::string label_column = "label";
    std::string rationale_column = "rationale";
    std::vector<std::string> classes;  // empty: sorted label values
    double test_fraction = 0.2;
  } data;
  struct Preprocess {
    int max_len = 100;
    int min_df = 5;
    bool lowercase = true;
    bool normalize_hashtags = true;
    bool strip_noise = true;
  } preprocess;
  struct Model {
    std::string arch = "conv-lstm";  // cnn, bilstm, conv-lstm, lr, nb
    int vocab_size = 20000;
    int embedding_dim = 100;
    int conv_filters = 64;
    int conv_width = 3;
    int pool_size = 2;
    int lstm_units = 32;
    int dense_units = 128;
    double dropout = 0.2;
    double noise = 0.1;
  } model;
  struct Train {
    std::string optimizer = "adagrad";
    double learning_rate = 0.01;
    int epochs = 10;
    int batch_size = 32;
    double clip_norm = 0.0;
  } train;
  struct Explain {
    std::string method = "lrp";
    double epsilon = 0.001;
    double delta = 1.0;
    int top_k = 10;
  } explain;
  struct Faithfulness {
    double p = 0.2;
    std::string sufficiency = "difference";
  } faithfulness;
  struct Ensemble {
    int folds = 5;
    std::string rule = "hard-majority";
    int grid_steps = 0;
  } ensemble;
  struct Synth {
    int classes = 4;
    int per_class = 50;
    int planted = 2;
    int noise_length = 20;
    int vocab = 200;
  } synth;
  struct Run {
    uint64_t seed = 0;
    std::string output = "hatex-out";
  } run;
};

// Every accepted "section.key".
std::vector<std::string> ConfigKeys();

// Sets one key from its textual value; problems are appended, not thrown.
void ApplySetting(RunConfig& config, const std::string& key,
                  const std::string& value, std::vector<std::string>& problems);

// Reads a sectioned key=value file into `config`, collecting problems.
void ApplyConfigFile(RunConfig& config, const std::string& path,
                     std::vector<std::string>& problems);

// Range and cross-field checks.
void CheckConfig(const RunConfig& config, std::vector<std::string>& problems);

// Defaults, then `path` (may be empty), then `overrides`. Throws UsageError
// listing every problem found.
RunConfig ResolveConfig(const std::string& path,
                        const std::vector<std::pair<std::string, std::string>>& overrides);

nlohmann::json ConfigToJson(const RunConfig& config);

}  // namespace hatex::cli

#endif  // HATEX_TOOLS_CLI_CONFIG_H_
