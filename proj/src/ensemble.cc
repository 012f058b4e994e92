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

#include "hatex/ensemble.h"

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "hatex/baselines.h"
#include "hatex/checkpoint.h"
#include "hatex/metrics.h"

namespace hatex {

const char* ToString(CombineRule rule) {
  return rule == CombineRule::kHardMajority ? "hard-majority" : "weighted-soft";
}

CombineRule ParseCombineRule(const std::string& name) {
  if (name == "hard-majority" || name == "hard") return CombineRule::kHardMajority;
  if (name == "weighted-soft" || name == "soft") return CombineRule::kWeightedSoft;
  throw ContractError("unknown combine rule '" + name +
                      "' (expected hard-majority or weighted-soft)");
}

namespace {

void CheckDistributions(std::span<const Vector> distributions) {
  if (distributions.size() < 2) throw ContractError("voting needs at least 2 members");
  const Index k = distributions.front().size();
  for (const auto& d : distributions) {
    if (d.size() != k) throw ContractError("members disagree on the class count");
  }
}

int Argmax(const Vector& v) {
  Index best = 0;
  v.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

Vector VoteShares(std::span<const Vector> distributions) {
  CheckDistributions(distributions);
  Vector shares = Vector::Zero(distributions.front().size());
  for (const auto& d : distributions) shares(Argmax(d)) += 1.0;
  return shares / static_cast<double>(distributions.size());
}

int MajorityVote(std::span<const Vector> distributions) {
  CheckDistributions(distributions);
  const Index k = distributions.front().size();
  std::vector<int> votes(static_cast<size_t>(k), 0);
  Vector mean = Vector::Zero(k);
  for (const auto& d : distributions) {
    ++votes[static_cast<size_t>(Argmax(d))];
    mean += d;
  }
  mean /= static_cast<double>(distributions.size());
  int best = 0;
  for (int c = 1; c < k; ++c) {
    const auto vc = votes[static_cast<size_t>(c)];
    const auto vb = votes[static_cast<size_t>(best)];
    if (vc > vb || (vc == vb && mean(c) > mean(best))) best = c;
  }
  return best;
}

CandidateScore ScoreCandidate(const std::string& id, const ModelGraph& model,
                              const LabeledCorpus& validation) {
  std::vector<int> gold;
  std::vector<int> pred;
  for (const auto& doc : validation.documents) {
    gold.push_back(doc.label);
    pred.push_back(model.Predict(doc.tokens));
  }
  const ConfusionMatrix cm = MakeConfusionMatrix(gold, pred, model.num_classes());
  return {id, ComputeClassReport(cm).macro_f1, Mcc(cm).value, LogNorm(model)};
}

std::vector<CandidateScore> SelectTopK(std::vector<CandidateScore> candidates,
                                       int k) {
  if (k <= 0) throw ContractError("top-k selection needs k >= 1, got " + std::to_string(k));
  if (static_cast<size_t>(k) > candidates.size()) {
    throw ContractError("top-k selection: k = " + std::to_string(k) + " but only " +
                        std::to_string(candidates.size()) + " candidates");
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateScore& a, const CandidateScore& b) {
              if (a.macro_f1 != b.macro_f1) return a.macro_f1 > b.macro_f1;
              if (a.log_norm != b.log_norm) return a.log_norm < b.log_norm;
              return a.id < b.id;
            });
  candidates.resize(static_cast<size_t>(k));
  return candidates;
}

std::vector<double> F1Weights(std::span<const double> f1) {
  if (f1.empty()) throw ContractError("no scores to weight");
  double total = 0.0;
  for (double f : f1) {
    if (f < 0.0) throw ContractError("negative F1 score");
    total += f;
  }
  std::vector<double> alpha(f1.size(), 1.0 / static_cast<double>(f1.size()));
  if (total > 0.0) {
    for (size_t i = 0; i < f1.size(); ++i) alpha[i] = f1[i] / total;
  }
  return alpha;
}

EnsembleMember MemberFromModel(std::string id,
                               std::shared_ptr<const ModelGraph> model) {
  if (!model->token_input()) {
    throw ContractError("ensemble member '" + id + "' must read token sequences");
  }
  return {std::move(id),
          [model](const TokenList& tokens) { return model->PredictProba(tokens); }};
}

EnsembleMember MemberFromModel(std::string id, ModelGraph model) {
  return MemberFromModel(std::move(id),
                         std::make_shared<const ModelGraph>(std::move(model)));
}

EnsembleModel::EnsembleModel(std::vector<EnsembleMember> members,
                             std::vector<double> alpha, CombineRule rule,
                             int num_classes)
    : members_(std::move(members)),
      alpha_(std::move(alpha)),
      rule_(rule),
      num_classes_(num_classes) {
  if (members_.size() < 2) throw ContractError("an ensemble needs at least 2 members");
  if (alpha_.size() != members_.size()) {
    throw ContractError("ensemble has " + std::to_string(members_.size()) +
                        " members but " + std::to_string(alpha_.size()) + " weights");
  }
  double total = 0.0;
  for (double a : alpha_) {
    if (!(a >= 0.0)) throw ContractError("ensemble weights must be non-negative");
    total += a;
  }
  if (!(total > 0.0)) throw ContractError("ensemble weights sum to zero");
  for (double& a : alpha_) a /= total;
}

std::vector<Vector> EnsembleModel::MemberOutputs(const TokenList& tokens) const {
  std::vector<Vector> out;
  out.reserve(members_.size());
  for (const auto& m : members_) {
    out.push_back(m.predict_proba(tokens));
    if (out.back().size() != num_classes_) {
      throw ContractError("member '" + m.id + "' returned the wrong class count");
    }
  }
  return out;
}

Vector EnsembleModel::PredictProba(const TokenList& tokens) const {
  const std::vector<Vector> outputs = MemberOutputs(tokens);
  if (rule_ == CombineRule::kHardMajority) return VoteShares(outputs);
  Vector p = Vector::Zero(num_classes_);
  for (size_t m = 0; m < outputs.size(); ++m) p += alpha_[m] * outputs[m];
  return p;
}

int EnsembleModel::Predict(const TokenList& tokens) const {
  const std::vector<Vector> outputs = MemberOutputs(tokens);
  if (rule_ == CombineRule::kHardMajority) return MajorityVote(outputs);
  Vector p = Vector::Zero(num_classes_);
  for (size_t m = 0; m < outputs.size(); ++m) p += alpha_[m] * outputs[m];
  return Argmax(p);
}

namespace {

// Soft-vote macro-F1 of precomputed member outputs under weights `alpha`.
double SoftF1(const std::vector<std::vector<Vector>>& outputs,
              const std::vector<int>& gold, const std::vector<double>& alpha,
              int num_classes) {
  std::vector<int> pred;
  pred.reserve(gold.size());
  for (const auto& per_member : outputs) {
    Vector p = Vector::Zero(num_classes);
    for (size_t m = 0; m < per_member.size(); ++m) p += alpha[m] * per_member[m];
    pred.push_back(Argmax(p));
  }
  return MacroF1(gold, pred, num_classes);
}

void Compositions(int remaining, size_t slot, std::vector<int>& parts,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (slot + 1 == parts.size()) {
    parts[slot] = remaining;
    visit(parts);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    parts[slot] = v;
    Compositions(remaining - v, slot + 1, parts, visit);
  }
}

std::vector<double> GridWeights(const std::vector<std::shared_ptr<const ModelGraph>>& models,
                                const LabeledCorpus& validation, int steps,
                                std::vector<double> start, int num_classes) {
  std::vector<std::vector<Vector>> outputs;
  std::vector<int> gold;
  for (const auto& doc : validation.documents) {
    gold.push_back(doc.label);
    std::vector<Vector> row;
    for (const auto& m : models) row.push_back(m->PredictProba(doc.tokens));
    outputs.push_back(std::move(row));
  }
  std::vector<double> best = start;
  double best_f1 = SoftF1(outputs, gold, best, num_classes);
  std::vector<int> parts(models.size(), 0);
  std::vector<double> alpha(models.size());
  Compositions(steps, 0, parts, [&](const std::vector<int>& p) {
    for (size_t i = 0; i < p.size(); ++i) alpha[i] = static_cast<double>(p[i]) / steps;
    const double f1 = SoftF1(outputs, gold, alpha, num_classes);
    if (f1 > best_f1) {
      best_f1 = f1;
      best = alpha;
    }
  });
  return best;
}

}  // namespace

CvResult CvTrain(const LabeledCorpus& corpus, const ModelSpec& spec,
                 const Vocabulary& vocab, const TrainConfig& config,
                 const CvOptions& options) {
  if (options.folds < 2) throw ContractError("cv_train needs at least 2 folds");
  if (options.grid_steps < 0) throw ContractError("grid steps must be >= 0");
  if (options.grid_steps > 0 && options.validation == nullptr) {
    throw ContractError("grid search over ensemble weights needs a validation corpus");
  }
  config.Validate();
  const std::vector<int> fold_of = StratifiedFolds(corpus, options.folds, options.fold_seed);
  std::vector<std::shared_ptr<const ModelGraph>> models;
  std::vector<double> fold_f1;
  for (int f = 0; f < options.folds; ++f) {
    std::vector<size_t> train_idx;
    std::vector<size_t> held_idx;
    for (size_t i = 0; i < fold_of.size(); ++i) {
      (fold_of[i] == f ? held_idx : train_idx).push_back(i);
    }
    const LabeledCorpus train = Subset(corpus, train_idx);
    const LabeledCorpus held = Subset(corpus, held_idx);
    TrainConfig fold_config = config;
    fold_config.seed = config.seed + static_cast<uint64_t>(f);
    auto model = std::make_shared<ModelGraph>(spec, vocab, corpus.class_names,
                                              config.seed + 1000 + static_cast<uint64_t>(f));
    try {
      Train(*model, train, fold_config);
    } catch (const Error& e) {
      throw TrainingError("fold " + std::to_string(f) + ": " + e.what());
    }
    std::vector<int> gold;
    std::vector<int> pred;
    for (const auto& doc : held.documents) {
      gold.push_back(doc.label);
      pred.push_back(model->Predict(doc.tokens));
    }
    fold_f1.push_back(MacroF1(gold, pred, corpus.num_classes()));
    models.push_back(std::move(model));
  }
  std::vector<double> alpha = F1Weights(fold_f1);
  if (options.grid_steps > 0) {
    alpha = GridWeights(models, *options.validation, options.grid_steps, alpha,
                        corpus.num_classes());
  }
  std::vector<EnsembleMember> members;
  for (size_t f = 0; f < models.size(); ++f) {
    members.push_back(MemberFromModel("fold" + std::to_string(f), models[f]));
  }
  EnsembleModel ensemble(std::move(members), alpha, options.rule, corpus.num_classes());
  return {std::move(models), std::move(fold_f1), ensemble.alpha(), std::move(ensemble)};
}

nlohmann::json ManifestToJson(const EnsembleManifest& manifest) {
  nlohmann::json j;
  j["format"] = "hatex-ensemble";
  j["rule"] = ToString(manifest.rule);
  j["alpha"] = manifest.alpha;
  j["members"] = nlohmann::json::array();
  for (const auto& m : manifest.members) {
    j["members"].push_back({{"id", m.id}, {"checkpoint", m.checkpoint}});
  }
  j["validation"] = nlohmann::json::array();
  for (const auto& s : manifest.scores) {
    j["validation"].push_back({{"id", s.id},
                               {"macro_f1", s.macro_f1},
                               {"mcc", s.mcc},
                               {"log_norm", s.log_norm}});
  }
  return j;
}

EnsembleManifest ManifestFromJson(const nlohmann::json& j) {
  try {
    if (j.at("format") != "hatex-ensemble") throw FormatError("not an ensemble manifest");
    EnsembleManifest m;
    m.rule = ParseCombineRule(j.at("rule").get<std::string>());
    m.alpha = j.at("alpha").get<std::vector<double>>();
    for (const auto& e : j.at("members")) {
      m.members.push_back({e.at("id").get<std::string>(),
                           e.at("checkpoint").get<std::string>()});
    }
    if (j.contains("validation")) {
      for (const auto& s : j.at("validation")) {
        m.scores.push_back({s.at("id").get<std::string>(), s.at("macro_f1").get<double>(),
                            s.at("mcc").get<double>(), s.at("log_norm").get<double>()});
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("ensemble manifest: ") + e.what());
  }
}

EnsembleModel LoadEnsemble(const EnsembleManifest& manifest,
                           const std::string& base_dir) {
  std::vector<EnsembleMember> members;
  int num_classes = -1;
  for (const auto& m : manifest.members) {
    std::filesystem::path p(m.checkpoint);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    ModelGraph model = LoadModel(p.string());
    if (num_classes < 0) num_classes = model.num_classes();
    if (model.num_classes() != num_classes) {
      throw ContractError("member '" + m.id + "' has a different class count");
    }
    members.push_back(MemberFromModel(m.id, std::move(model)));
  }
  return EnsembleModel(std::move(members), manifest.alpha, manifest.rule, num_classes);
}

}  // namespace hatex
