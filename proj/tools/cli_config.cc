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

#include "cli_config.h"

#include <charconv>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>

namespace hatex::cli {
namespace {

void Parse(const std::string& v, std::string& out) { out = v; }

void Parse(const std::string& v, int& out) {
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
}

void Parse(const std::string& v, uint64_t& out) {
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
  }
}

void Parse(const std::string& v, double& out) {
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
}

void Parse(const std::string& v, bool& out) {
  static const std::set<std::string> yes = {"1", "true", "yes", "on"};
  static const std::set<std::string> no = {"0", "false", "no", "off"};
  if (yes.count(v)) {
    out = true;
  } else if (no.count(v)) {
    out = false;
  } else {
    throw std::invalid_argument("expected true or false, got '" + v + "'");
  }
}

void Parse(const std::string& v, std::vector<std::string>& out) {
  out.clear();
  std::string cur;
  for (char ch : v + ",") {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
}

struct Entry {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<nlohmann::json(const RunConfig&)> get;
};

template <typename Access>
Entry Bind(Access access) {
  return {[access](RunConfig& c, const std::string& v) { Parse(v, access(c)); },
          [access](const RunConfig& c) {
            return nlohmann::json(access(const_cast<RunConfig&>(c)));
          }};
}

#define HATEX_FIELD(key, member) \
  {key, Bind([](RunConfig& c) -> auto& { return c.member; })}

const std::map<std::string, Entry>& Table() {
  static const std::map<std::string, Entry> table = {
      HATEX_FIELD("data.corpus", data.corpus),
      HATEX_FIELD("data.train", data.train),
      HATEX_FIELD("data.test", data.test),
      HATEX_FIELD("data.annotations", data.annotations),
      HATEX_FIELD("data.id_column", data.id_column),
      HATEX_FIELD("data.text_column", data.text_column),
      HATEX_FIELD("data.label_column", data.label_column),
      HATEX_FIELD("data.rationale_column", data.rationale_column),
      HATEX_FIELD("data.classes", data.classes),
      HATEX_FIELD("data.test_fraction", data.test_fraction),
      HATEX_FIELD("preprocess.max_len", preprocess.max_len),
      HATEX_FIELD("preprocess.min_df", preprocess.min_df),
      HATEX_FIELD("preprocess.lowercase", preprocess.lowercase),
      HATEX_FIELD("preprocess.normalize_hashtags", preprocess.normalize_hashtags),
      HATEX_FIELD("preprocess.strip_noise", preprocess.strip_noise),
      HATEX_FIELD("model.arch", model.arch),
      HATEX_FIELD("model.vocab_size", model.vocab_size),
      HATEX_FIELD("model.embedding_dim", model.embedding_dim),
      HATEX_FIELD("model.conv_filters", model.conv_filters),
      HATEX_FIELD("model.conv_width", model.conv_width),
      HATEX_FIELD("model.pool_size", model.pool_size),
      HATEX_FIELD("model.lstm_units", model.lstm_units),
      HATEX_FIELD("model.dense_units", model.dense_units),
      HATEX_FIELD("model.dropout", model.dropout),
      HATEX_FIELD("model.noise", model.noise),
      HATEX_FIELD("train.optimizer", train.optimizer),
      HATEX_FIELD("train.learning_rate", train.learning_rate),
      HATEX_FIELD("train.epochs", train.epochs),
      HATEX_FIELD("train.batch_size", train.batch_size),
      HATEX_FIELD("train.clip_norm", train.clip_norm),
      HATEX_FIELD("explain.method", explain.method),
      HATEX_FIELD("explain.epsilon", explain.epsilon),
      HATEX_FIELD("explain.delta", explain.delta),
      HATEX_FIELD("explain.top_k", explain.top_k),
      HATEX_FIELD("faithfulness.p", faithfulness.p),
      HATEX_FIELD("faithfulness.sufficiency", faithfulness.sufficiency),
      HATEX_FIELD("ensemble.folds", ensemble.folds),
      HATEX_FIELD("ensemble.rule", ensemble.rule),
      HATEX_FIELD("ensemble.grid_steps", ensemble.grid_steps),
      HATEX_FIELD("synth.classes", synth.classes),
      HATEX_FIELD("synth.per_class", synth.per_class),
      HATEX_FIELD("synth.planted", synth.planted),
      HATEX_FIELD("synth.noise_length", synth.noise_length),
      HATEX_FIELD("synth.vocab", synth.vocab),
      HATEX_FIELD("run.seed", run.seed),
      HATEX_FIELD("run.output", run.output),
  };
  return table;
}

#undef HATEX_FIELD

std::string Joined(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

}  // namespace

UsageError::UsageError(const std::vector<std::string>& problems)
    : Error(Joined(problems)), problems_(problems) {}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [key, entry] : Table()) keys.push_back(key);
  return keys;
}

void ApplySetting(RunConfig& config, const std::string& key,
                  const std::string& value, std::vector<std::string>& problems) {
  const auto it = Table().find(key);
  if (it == Table().end()) {
    problems.push_back("unknown key '" + key + "'");
    return;
  }
  try {
    it->second.set(config, value);
  } catch (const std::invalid_argument& e) {
    problems.push_back(key + ": " + e.what());
  }
}

void ApplyConfigFile(RunConfig& config, const std::string& path,
                     std::vector<std::string>& problems) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error&) {
    problems.push_back("cannot read config file '" + path + "'");
    return;
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string key;
    for (const auto& parent : item.parents) key += parent + ".";
    key += item.name;
    std::string value;
    for (size_t i = 0; i < item.inputs.size(); ++i) {
      if (i) value += ' ';
      value += item.inputs[i];
    }
    ApplySetting(config, key, value, problems);
  }
}

void CheckConfig(const RunConfig& c, std::vector<std::string>& problems) {
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  auto one_of = [&](const std::string& key, const std::string& v,
                    std::initializer_list<const char*> allowed) {
    std::string list;
    for (const char* a : allowed) {
      if (v == a) return;
      list += list.empty() ? a : std::string(", ") + a;
    }
    problems.push_back(key + ": '" + v + "' is not one of " + list);
  };
  need(c.data.test_fraction > 0.0 && c.data.test_fraction < 1.0,
       "data.test_fraction must lie in (0, 1)");
  need(c.data.classes.empty() || c.data.classes.size() >= 2,
       "data.classes needs at least 2 names");
  need(c.preprocess.max_len >= 1, "preprocess.max_len must be >= 1");
  need(c.preprocess.min_df >= 1, "preprocess.min_df must be >= 1");
  one_of("model.arch", c.model.arch, {"cnn", "bilstm", "conv-lstm", "lr", "nb"});
  need(c.model.vocab_size >= 2, "model.vocab_size must be >= 2");
  need(c.model.embedding_dim >= 1, "model.embedding_dim must be >= 1");
  need(c.model.conv_filters >= 1, "model.conv_filters must be >= 1");
  need(c.model.conv_width >= 1, "model.conv_width must be >= 1");
  need(c.model.pool_size >= 0, "model.pool_size must be >= 0");
  need(c.model.lstm_units >= 1, "model.lstm_units must be >= 1");
  need(c.model.dense_units >= 1, "model.dense_units must be >= 1");
  need(c.model.dropout >= 0.0 && c.model.dropout < 1.0, "model.dropout must lie in [0, 1)");
  need(c.model.noise >= 0.0, "model.noise must be >= 0");
  if (c.preprocess.max_len >= 1) {
    need(c.model.conv_width <= c.preprocess.max_len,
         "model.conv_width exceeds preprocess.max_len");
    need(c.model.pool_size <= c.preprocess.max_len,
         "model.pool_size exceeds preprocess.max_len");
  }
  one_of("train.optimizer", c.train.optimizer, {"adagrad", "adam"});
  need(c.train.learning_rate >= 0.0, "train.learning_rate must be >= 0");
  need(c.train.epochs >= 1, "train.epochs must be >= 1");
  need(c.train.batch_size >= 1, "train.batch_size must be >= 1");
  need(c.train.clip_norm >= 0.0, "train.clip_norm must be >= 0");
  one_of("explain.method", c.explain.method, {"sa", "lrp", "loo"});
  need(c.explain.epsilon >= 0.0, "explain.epsilon must be >= 0");
  need(c.explain.top_k >= 1, "explain.top_k must be >= 1");
  need(c.faithfulness.p > 0.0 && c.faithfulness.p <= 1.0,
       "faithfulness.p must lie in (0, 1]");
  one_of("faithfulness.sufficiency", c.faithfulness.sufficiency,
         {"difference", "product"});
  need(c.ensemble.folds >= 2, "ensemble.folds must be >= 2");
  one_of("ensemble.rule", c.ensemble.rule,
         {"hard-majority", "weighted-soft", "hard", "soft"});
  need(c.ensemble.grid_steps >= 0, "ensemble.grid_steps must be >= 0");
  need(c.synth.classes >= 2, "synth.classes must be >= 2");
  need(c.synth.per_class >= 1, "synth.per_class must be >= 1");
  need(c.synth.planted >= 1, "synth.planted must be >= 1");
  need(c.synth.noise_length >= 0, "synth.noise_length must be >= 0");
  need(c.synth.vocab >= 1, "synth.vocab must be >= 1");
  need(!c.run.output.empty(), "run.output must not be empty");
}

RunConfig ResolveConfig(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig config;
  std::vector<std::string> problems;
  if (!path.empty()) ApplyConfigFile(config, path, problems);
  for (const auto& [key, value] : overrides) ApplySetting(config, key, value, problems);
  CheckConfig(config, problems);
  if (!problems.empty()) throw UsageError(problems);
  return config;
}

nlohmann::json ConfigToJson(const RunConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, entry] : Table()) {
    const auto dot = key.find('.');
    j[key.substr(0, dot)][key.substr(dot + 1)] = entry.get(config);
  }
  return j;
}

}  // namespace hatex::cli
