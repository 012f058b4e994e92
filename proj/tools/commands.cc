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

#include "commands.h"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <utility>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "cli_config.h"
#include "hatex/agreement.h"
#include "hatex/baselines.h"
#include "hatex/checkpoint.h"
#include "hatex/corpus.h"
#include "hatex/ensemble.h"
#include "hatex/explain.h"
#include "hatex/faithfulness.h"
#include "hatex/features.h"
#include "hatex/heatmap.h"
#include "hatex/metrics.h"
#include "hatex/model.h"
#include "hatex/reports.h"
#include "hatex/train.h"

namespace hatex::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Invocation {
  std::string command;
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> sets;
  std::string output;
  std::string model;
  std::vector<std::string> doc_ids;
  std::string target_class;
  int limit = 0;
};

struct Split {
  LabeledCorpus train;
  LabeledCorpus test;
};

// A fitted model of any kind the CLI can write.
struct Predictor {
  std::vector<std::string> class_names;
  std::function<int(const Document&)> predict;
};

PreprocessConfig Preprocessing(const RunConfig& c) {
  PreprocessConfig p;
  p.lowercase = c.preprocess.lowercase;
  p.normalize_hashtags = c.preprocess.normalize_hashtags;
  p.strip_emojis_mentions_duplicates = c.preprocess.strip_noise;
  p.min_df = c.preprocess.min_df;
  p.max_len = c.preprocess.max_len;
  return p;
}

CorpusSchema Schema(const RunConfig& c, std::vector<std::string> classes) {
  CorpusSchema s;
  s.id_column = c.data.id_column;
  s.text_column = c.data.text_column;
  s.label_column = c.data.label_column;
  s.rationale_column = c.data.rationale_column;
  s.class_names = classes.empty() ? c.data.classes : std::move(classes);
  s.preprocess = Preprocessing(c);
  return s;
}

void RequireData(const RunConfig& c) {
  if (!c.data.train.empty() || !c.data.test.empty()) {
    if (c.data.train.empty() || c.data.test.empty()) {
      throw UsageError({"data.train and data.test must be given together"});
    }
    return;
  }
  if (c.data.corpus.empty()) {
    throw UsageError({"no data: set data.corpus, or data.train and data.test"});
  }
}

// Either the given train/test files, or a stratified split of the corpus
// after the min_df filter. The split is a pure function of the config.
Split LoadSplit(const RunConfig& c, const std::vector<std::string>& classes = {}) {
  RequireData(c);
  Split s;
  if (!c.data.train.empty()) {
    s.train = LoadCorpus(c.data.train, Schema(c, classes));
    s.test = LoadCorpus(c.data.test, Schema(c, s.train.class_names));
    return s;
  }
  LabeledCorpus full = LoadCorpus(c.data.corpus, Schema(c, classes));
  if (c.preprocess.min_df > 1) full = FilterInfrequent(full, c.preprocess.min_df);
  auto [train, test] = SplitTrainTest(full, c.data.test_fraction, c.run.seed);
  s.train = std::move(train);
  s.test = std::move(test);
  return s;
}

void CheckClasses(const std::vector<std::string>& model,
                  const std::vector<std::string>& data) {
  if (model != data) {
    throw ContractError("the data's classes do not match the model's classes");
  }
}

ArchitectureOptions Architecture(const RunConfig& c) {
  ArchitectureOptions o;
  o.max_len = c.preprocess.max_len;
  o.embedding_dim = c.model.embedding_dim;
  o.conv_filters = c.model.conv_filters;
  o.conv_width = c.model.conv_width;
  o.pool_size = c.model.pool_size;
  o.lstm_units = c.model.lstm_units;
  o.dense_units = c.model.dense_units;
  o.dropout = c.model.dropout;
  o.noise = c.model.noise;
  return o;
}

TrainConfig Training(const RunConfig& c) {
  TrainConfig t;
  t.optimizer = ParseOptimizer(c.train.optimizer);
  t.learning_rate = c.train.learning_rate;
  t.epochs = c.train.epochs;
  t.batch_size = c.train.batch_size;
  t.clip_norm = c.train.clip_norm;
  t.seed = c.run.seed;
  return t;
}

LrpConfig Lrp(const RunConfig& c) { return {c.explain.epsilon, c.explain.delta}; }

bool IsNeural(const std::string& arch) { return arch != "lr" && arch != "nb"; }

json TfIdfToJson(const TfIdfModel& m) {
  return {{"char_ngram_lo", m.options().char_ngram_lo},
          {"char_ngram_hi", m.options().char_ngram_hi},
          {"use_word_unigrams", m.options().use_word_unigrams},
          {"features", m.features()},
          {"df", m.document_frequency()},
          {"num_docs", m.num_docs()}};
}

TfIdfModel TfIdfFromJson(const json& j) {
  TfIdfOptions o;
  o.char_ngram_lo = j.at("char_ngram_lo").get<int>();
  o.char_ngram_hi = j.at("char_ngram_hi").get<int>();
  o.use_word_unigrams = j.at("use_word_unigrams").get<bool>();
  return TfIdfModel(o, j.at("features").get<std::vector<std::string>>(),
                    j.at("df").get<std::vector<int>>(), j.at("num_docs").get<int>());
}

RowVector Dense(const SparseVector& v) {
  RowVector out = RowVector::Zero(v.size());
  for (SparseVector::InnerIterator it(v); it; ++it) out(it.index()) = it.value();
  return out;
}

Predictor PredictorFromFile(const std::string& path) {
  const json j = ReadJson(path);
  const std::string format = j.value("format", "");
  if (format == "hatex-model") {
    auto model = std::make_shared<const ModelGraph>(ModelFromJson(j));
    return {model->class_names(),
            [model](const Document& d) { return model->Predict(d.tokens); }};
  }
  if (format == "hatex-ensemble") {
    const std::string base = fs::path(path).parent_path().string();
    auto ens = std::make_shared<const EnsembleModel>(
        LoadEnsemble(ManifestFromJson(j), base));
    const ModelGraph first = LoadModel(
        (fs::path(base) / ManifestFromJson(j).members.at(0).checkpoint).string());
    return {first.class_names(),
            [ens](const Document& d) { return ens->Predict(d.tokens); }};
  }
  if (format == "hatex-baseline") {
    auto tfidf = std::make_shared<const TfIdfModel>(TfIdfFromJson(j.at("tfidf")));
    auto names = j.at("class_names").get<std::vector<std::string>>();
    if (j.at("kind") == "nb") {
      auto nb = std::make_shared<const NaiveBayes>(NaiveBayes::FromJson(j.at("model")));
      return {names, [nb, tfidf](const Document& d) {
                return nb->Predict(TransformTfIdf(*tfidf, d));
              }};
    }
    auto lr = std::make_shared<const ModelGraph>(ModelFromJson(j.at("model")));
    return {names, [lr, tfidf](const Document& d) {
              Index best = 0;
              lr->PredictProbaFeatures(Dense(TransformTfIdf(*tfidf, d))).maxCoeff(&best);
              return static_cast<int>(best);
            }};
  }
  throw FormatError(path + ": unrecognised checkpoint format '" + format + "'");
}

ModelGraph NeuralModel(const std::string& path) {
  const json j = ReadJson(path);
  if (j.value("format", "") != "hatex-model") {
    throw CapabilityError(path + " is not a neural token model checkpoint");
  }
  return ModelFromJson(j);
}

json Evaluate(const Predictor& p, const LabeledCorpus& data) {
  std::vector<int> gold;
  std::vector<int> predicted;
  for (const auto& doc : data.documents) {
    gold.push_back(doc.label);
    predicted.push_back(p.predict(doc));
  }
  const ConfusionMatrix cm =
      MakeConfusionMatrix(gold, predicted, static_cast<int>(p.class_names.size()));
  return MetricsToJson(cm, p.class_names);
}

std::string SafeName(const std::string& id) {
  std::string out;
  for (unsigned char ch : id) {
    out += std::isalnum(ch) || ch == '-' || ch == '_' || ch == '.' ? static_cast<char>(ch) : '_';
  }
  return out.empty() ? "_" : out;
}

void WriteManifest(const fs::path& out, const Invocation& inv, const RunConfig& c) {
  json args = json::object();
  if (!inv.model.empty()) args["model"] = inv.model;
  if (!inv.doc_ids.empty()) args["doc_ids"] = inv.doc_ids;
  if (!inv.target_class.empty()) args["class"] = inv.target_class;
  if (inv.limit > 0) args["limit"] = inv.limit;
  json versions = {
      {"hatex", kToolVersion},
      {"checkpoint", kCheckpointVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
      {"cli11", CLI11_VERSION},
  };
  WriteJson({{"command", inv.command},
             {"seed", c.run.seed},
             {"config", ConfigToJson(c)},
             {"arguments", args},
             {"versions", versions}},
            (out / "manifest.json").string());
}

// ---- subcommands ----

void Synth(const RunConfig& c, const fs::path& out) {
  SynthSpec s;
  s.num_classes = c.synth.classes;
  s.docs_per_class = c.synth.per_class;
  s.planted_per_class = c.synth.planted;
  s.noise_length = c.synth.noise_length;
  s.vocab_size = c.synth.vocab;
  s.seed = c.run.seed;
  const LabeledCorpus corpus = SynthCorpus(s);
  WriteCorpusCsv(corpus, (out / "corpus.csv").string());
  json planted = json::object();
  const auto tokens = PlantedTokens(s);
  for (size_t k = 0; k < tokens.size(); ++k) planted[corpus.class_names[k]] = tokens[k];
  WriteJson({{"documents", corpus.size()}, {"planted", planted}},
            (out / "synth.json").string());
}

void Prepare(const RunConfig& c, const fs::path& out) {
  const Split s = LoadSplit(c);
  WriteCorpusCsv(s.train, (out / "train.csv").string());
  WriteCorpusCsv(s.test, (out / "test.csv").string());
  json per_class = json::object();
  for (int k = 0; k < s.train.num_classes(); ++k) {
    int tr = 0;
    int te = 0;
    for (const auto& d : s.train.documents) tr += d.label == k;
    for (const auto& d : s.test.documents) te += d.label == k;
    per_class[s.train.class_names[static_cast<size_t>(k)]] = {{"train", tr}, {"test", te}};
  }
  int empty = 0;
  for (const auto* part : {&s.train, &s.test}) {
    for (const auto& d : part->documents) empty += d.tokens.empty();
  }
  WriteJson({{"train", s.train.size()},
             {"test", s.test.size()},
             {"classes", s.train.class_names},
             {"per_class", per_class},
             {"empty_documents", empty}},
            (out / "prepare.json").string());
}

void Agree(const RunConfig& c, const fs::path& out) {
  const AnnotationSet set = LoadAnnotations(c.data.annotations, c.data.classes);
  json j = KappaToJson(ComputeKappaReport(set.matrix), set.categories);
  j["subjects"] = set.matrix.subjects();
  j["annotators"] = set.matrix.annotators();
  WriteJson(j, (out / "kappa.json").string());
}

void TrainCommand(const RunConfig& c, const fs::path& out) {
  const Split s = LoadSplit(c);
  const int k = s.train.num_classes();
  fs::create_directories(out / "checkpoints");
  const std::string ckpt = (out / "checkpoints" / "model.json").string();
  const TrainConfig tc = Training(c);
  std::vector<int> labels;
  for (const auto& d : s.train.documents) labels.push_back(d.label);

  if (IsNeural(c.model.arch)) {
    const ModelSpec spec = ArchitectureSpec(c.model.arch, k, Architecture(c));
    ModelGraph model(spec, BuildVocabulary(s.train, c.model.vocab_size),
                     s.train.class_names, c.run.seed);
    const TrainHistory h = Train(model, s.train, tc);
    SaveModel(model, ckpt);
    WriteJson(HistoryToJson(h), (out / "history.json").string());
  } else {
    const TfIdfModel tfidf = FitTfIdf(s.train, TfIdfOptions{});
    const SparseMatrix x = TransformTfIdf(tfidf, s.train);
    json j = {{"format", "hatex-baseline"},
              {"version", kCheckpointVersion},
              {"kind", c.model.arch},
              {"class_names", s.train.class_names},
              {"tfidf", TfIdfToJson(tfidf)}};
    if (c.model.arch == "nb") {
      j["model"] = NaiveBayes::Fit(x, labels, k).ToJson();
    } else {
      ModelGraph lr = BuildSoftmaxRegression(tfidf.num_features(),
                                             s.train.class_names, c.run.seed);
      const TrainHistory h = TrainFeatures(lr, x, labels, tc);
      WriteJson(HistoryToJson(h), (out / "history.json").string());
      j["model"] = ModelToJson(lr);
    }
    WriteJson(j, ckpt);
  }
  WriteJson(Evaluate(PredictorFromFile(ckpt), s.test), (out / "metrics.json").string());
}

void EvalCommand(const RunConfig& c, const Invocation& inv, const fs::path& out) {
  const Predictor p = PredictorFromFile(inv.model);
  const Split s = LoadSplit(c, p.class_names);
  CheckClasses(p.class_names, s.test.class_names);
  WriteJson(Evaluate(p, s.test), (out / "metrics.json").string());
}

void ExplainCommand(const RunConfig& c, const Invocation& inv, const fs::path& out) {
  const ModelGraph model = NeuralModel(inv.model);
  const Split s = LoadSplit(c, model.class_names());
  CheckClasses(model.class_names(), s.test.class_names);
  const ExplainMethod method = ParseExplainMethod(c.explain.method);

  std::vector<const Document*> docs;
  if (inv.doc_ids.empty()) {
    for (const auto& d : s.test.documents) {
      if (inv.limit > 0 && static_cast<int>(docs.size()) >= inv.limit) break;
      docs.push_back(&d);
    }
  } else {
    std::map<std::string, const Document*> by_id;
    for (const auto* part : {&s.train, &s.test}) {
      for (const auto& d : part->documents) by_id.emplace(d.id, &d);
    }
    for (const auto& id : inv.doc_ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw ContractError("no document with id '" + id + "'");
      docs.push_back(it->second);
    }
  }
  std::optional<int> fixed;
  if (!inv.target_class.empty()) {
    const int t = s.test.class_index(inv.target_class);
    if (t < 0) throw ContractError("unknown class '" + inv.target_class + "'");
    fixed = t;
  }

  fs::create_directories(out / "relevance");
  fs::create_directories(out / "heatmaps");
  json index = json::array();
  for (const Document* d : docs) {
    const int target = fixed ? *fixed : model.Predict(d->tokens);
    json entry = {{"doc_id", d->id}, {"class", model.class_names()[static_cast<size_t>(target)]}};
    if (d->tokens.empty()) {
      entry["skipped"] = "empty document";
      index.push_back(entry);
      continue;
    }
    const RelevanceMap rel = Explain(model, *d, target, method, Lrp(c));
    const std::string name = SafeName(d->id);
    WriteJson(RelevanceToJson(rel, model.class_names()),
              (out / "relevance" / (name + ".json")).string());
    WriteHeatmap(*d, rel, model.class_names(),
                 (out / "heatmaps" / (name + ".html")).string());
    entry["relevance"] = "relevance/" + name + ".json";
    entry["heatmap"] = "heatmaps/" + name + ".html";
    index.push_back(entry);
  }
  WriteJson({{"method", ToString(method)}, {"documents", index}},
            (out / "explain.json").string());
}

void FaithfulnessCommand(const RunConfig& c, const Invocation& inv, const fs::path& out) {
  const ModelGraph model = NeuralModel(inv.model);
  const Split s = LoadSplit(c, model.class_names());
  CheckClasses(model.class_names(), s.test.class_names);
  FaithfulnessOptions o;
  o.p = c.faithfulness.p;
  o.form = c.faithfulness.sufficiency == "product" ? SufficiencyForm::kProduct
                                                   : SufficiencyForm::kDifference;
  o.lrp = Lrp(c);
  const FaithfulnessReport r =
      ComputeFaithfulness(model, s.test, ParseExplainMethod(c.explain.method), o,
                          fs::path(inv.model).filename().string());
  WriteJson(FaithfulnessToJson(r), (out / "faithfulness.json").string());
}

void EnsembleCommand(const RunConfig& c, const fs::path& out) {
  if (!IsNeural(c.model.arch)) {
    throw UsageError({"ensemble needs a neural model.arch (cnn, bilstm or conv-lstm)"});
  }
  Split s = LoadSplit(c);
  const int k = s.train.num_classes();
  CvOptions o;
  o.folds = c.ensemble.folds;
  o.fold_seed = c.run.seed;
  o.rule = ParseCombineRule(c.ensemble.rule);
  o.grid_steps = c.ensemble.grid_steps;
  LabeledCorpus fit = s.train;
  LabeledCorpus validation;
  if (o.grid_steps > 0) {
    // The weight search gets its own slice of the training data.
    auto [a, b] = SplitTrainTest(s.train, c.data.test_fraction, c.run.seed + 1);
    fit = std::move(a);
    validation = std::move(b);
    o.validation = &validation;
  }
  const Vocabulary vocab = BuildVocabulary(fit, c.model.vocab_size);
  const ModelSpec spec = ArchitectureSpec(c.model.arch, k, Architecture(c));
  const CvResult cv = CvTrain(fit, spec, vocab, Training(c), o);

  fs::create_directories(out / "checkpoints");
  EnsembleManifest m;
  m.alpha = cv.alpha;
  m.rule = o.rule;
  for (size_t f = 0; f < cv.models.size(); ++f) {
    const std::string id = "fold-" + std::to_string(f);
    const std::string rel = "checkpoints/" + id + ".json";
    SaveModel(*cv.models[f], (out / rel).string());
    m.members.push_back({id, rel});
    m.scores.push_back(ScoreCandidate(id, *cv.models[f], s.test));
  }
  json j = ManifestToJson(m);
  j["fold_f1"] = cv.fold_f1;
  WriteJson(j, (out / "ensemble.json").string());
  Predictor p{s.train.class_names,
              [&cv](const Document& d) { return cv.ensemble.Predict(d.tokens); }};
  WriteJson(Evaluate(p, s.test), (out / "metrics.json").string());
}

void GlobalTermsCommand(const RunConfig& c, const fs::path& out, const Invocation& inv) {
  const ModelGraph model = NeuralModel(inv.model);
  const Split s = LoadSplit(c, model.class_names());
  CheckClasses(model.class_names(), s.test.class_names);
  const ExplainMethod method = ParseExplainMethod(c.explain.method);
  const auto terms = GlobalTerms(model, s.test, method, c.explain.top_k, Lrp(c));
  WriteJson(GlobalTermsToJson(terms, model.class_names(), method),
            (out / "global_terms.json").string());
}

// ---- argument wiring ----

class Wiring {
 public:
  explicit Wiring(Invocation& inv) : inv_(inv) {}

  CLI::App* Add(CLI::App& app, const std::string& name, const std::string& about) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("-c,--config", inv_.config_path, "sectioned key=value config file")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", inv_.output,
                    std::string("output directory (overrides ") + kOutputDirEnv +
                        " and run.output)");
    Map(sub, "--seed", "run.seed", "root random seed");
    sub->add_option("--set", inv_.sets, "extra setting as section.key=value");
    sub->callback([this, name] { inv_.command = name; });
    return sub;
  }

  void Map(CLI::App* sub, const std::string& flag, const std::string& key,
           const std::string& about) {
    sub->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { inv_.overrides.emplace_back(key, v); },
        about + " [" + key + "]");
  }

  void Data(CLI::App* sub) {
    Map(sub, "--corpus", "data.corpus", "labelled CSV, split into train/test");
    Map(sub, "--train", "data.train", "training CSV (with --test)");
    Map(sub, "--test", "data.test", "held-out CSV (with --train)");
    Map(sub, "--classes", "data.classes", "comma-separated class order");
    Map(sub, "--max-len", "preprocess.max_len", "tokens kept per document");
    Map(sub, "--min-df", "preprocess.min_df", "drop rarer tokens");
  }

  void ModelPath(CLI::App* sub) {
    sub->add_option("-m,--model", inv_.model, "checkpoint JSON")
        ->required()
        ->check(CLI::ExistingFile);
  }

  void Learning(CLI::App* sub) {
    Map(sub, "--arch", "model.arch", "cnn, bilstm, conv-lstm, lr or nb");
    Map(sub, "--epochs", "train.epochs", "training epochs");
    Map(sub, "--lr", "train.learning_rate", "learning rate");
    Map(sub, "--optimizer", "train.optimizer", "adagrad or adam");
    Map(sub, "--batch-size", "train.batch_size", "mini-batch size");
  }

  void Method(CLI::App* sub) {
    Map(sub, "--method", "explain.method", "sa, lrp or loo");
    Map(sub, "--epsilon", "explain.epsilon", "LRP stabiliser");
    Map(sub, "--delta", "explain.delta", "LRP bias share");
  }

  Invocation& inv_;
};

}  // namespace

int RunCli(int argc, const char* const* argv) {
  Invocation inv;
  CLI::App app("Explainable hate-speech classification toolkit.", "hatex");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Wiring w(inv);

  CLI::App* synth = w.Add(app, "synth", "write a planted-token corpus");
  w.Map(synth, "--classes", "synth.classes", "number of classes");
  w.Map(synth, "--per-class", "synth.per_class", "documents per class");
  w.Map(synth, "--planted", "synth.planted", "planted tokens per class");
  w.Map(synth, "--noise-length", "synth.noise_length", "noise tokens per document");
  w.Map(synth, "--vocab", "synth.vocab", "noise vocabulary size");

  CLI::App* prepare = w.Add(app, "prepare", "preprocess, filter and split a corpus");
  w.Data(prepare);
  w.Map(prepare, "--test-fraction", "data.test_fraction", "held-out share");

  CLI::App* agree = w.Add(app, "agree", "inter-annotator agreement");
  w.Map(agree, "--annotations", "data.annotations", "annotation CSV");
  w.Map(agree, "--categories", "data.classes", "comma-separated category order");

  CLI::App* train = w.Add(app, "train", "train a classifier and score it");
  w.Data(train);
  w.Learning(train);

  CLI::App* eval = w.Add(app, "eval", "score a checkpoint on held-out data");
  w.Data(eval);
  w.ModelPath(eval);

  CLI::App* explain = w.Add(app, "explain", "token relevance maps and heat maps");
  w.Data(explain);
  w.ModelPath(explain);
  w.Method(explain);
  explain->add_option("--doc-id", inv.doc_ids, "document to explain (repeatable)");
  explain->add_option("--class", inv.target_class, "class to explain (default: predicted)");
  explain->add_option("--limit", inv.limit, "explain at most this many test documents")
      ->check(CLI::NonNegativeNumber);

  CLI::App* faith = w.Add(app, "faithfulness", "comprehensiveness and sufficiency");
  w.Data(faith);
  w.ModelPath(faith);
  w.Method(faith);
  w.Map(faith, "--p", "faithfulness.p", "rationale fraction");
  w.Map(faith, "--sufficiency", "faithfulness.sufficiency", "difference or product");

  CLI::App* ensemble = w.Add(app, "ensemble", "cross-validated fold ensemble");
  w.Data(ensemble);
  w.Learning(ensemble);
  w.Map(ensemble, "--folds", "ensemble.folds", "number of folds");
  w.Map(ensemble, "--rule", "ensemble.rule", "hard-majority or weighted-soft");
  w.Map(ensemble, "--grid-steps", "ensemble.grid_steps", "simplex weight search");

  CLI::App* terms = w.Add(app, "global-terms", "most and least relevant terms per class");
  w.Data(terms);
  w.ModelPath(terms);
  w.Method(terms);
  w.Map(terms, "--top-k", "explain.top_k", "terms per list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& s : inv.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw UsageError({"--set expects key=value, got '" + s + "'"});
      inv.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!inv.output.empty()) {
      inv.overrides.emplace_back("run.output", inv.output);
    } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
      inv.overrides.emplace_back("run.output", env);
    }
    const RunConfig config = ResolveConfig(inv.config_path, inv.overrides);
    const std::string& cmd = inv.command;
    if (cmd == "agree" && config.data.annotations.empty()) {
      throw UsageError({"agree needs data.annotations"});
    }
    if (cmd != "synth" && cmd != "agree") RequireData(config);

    const fs::path out = config.run.output;
    fs::create_directories(out);
    WriteManifest(out, inv, config);

    if (cmd == "synth") Synth(config, out);
    else if (cmd == "prepare") Prepare(config, out);
    else if (cmd == "agree") Agree(config, out);
    else if (cmd == "train") TrainCommand(config, out);
    else if (cmd == "eval") EvalCommand(config, inv, out);
    else if (cmd == "explain") ExplainCommand(config, inv, out);
    else if (cmd == "faithfulness") FaithfulnessCommand(config, inv, out);
    else if (cmd == "ensemble") EnsembleCommand(config, out);
    else if (cmd == "global-terms") GlobalTermsCommand(config, out, inv);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "hatex " << inv.command << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hatex " << inv.command << ": error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hatex::cli
