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

#ifndef HATEX_ENSEMBLE_H_
#define HATEX_ENSEMBLE_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hatex/corpus.h"
#include "hatex/model.h"
#include "hatex/train.h"

namespace hatex {

enum class CombineRule { kHardMajority, kWeightedSoft };

const char* ToString(CombineRule rule);
CombineRule ParseCombineRule(const std::string& name);

// Label with the most argmax votes; ties go to the highest mean probability
// among the tied labels, then to the lowest index.
int MajorityVote(std::span<const Vector> distributions);

// Fraction of members voting for each class.
Vector VoteShares(std::span<const Vector> distributions);

struct CandidateScore {
  std::string id;
  double macro_f1 = 0.0;
  double mcc = 0.0;
  double log_norm = 0.0;
};

CandidateScore ScoreCandidate(const std::string& id, const ModelGraph& model,
                              const LabeledCorpus& validation);

// Macro-F1 descending, then lower log-norm, then id; first k.
std::vector<CandidateScore> SelectTopK(std::vector<CandidateScore> candidates,
                                       int k);

// alpha_m = f1_m / sum f1, uniform when every score is zero.
std::vector<double> F1Weights(std::span<const double> f1);

struct EnsembleMember {
  std::string id;
  std::function<Vector(const TokenList&)> predict_proba;
};

EnsembleMember MemberFromModel(std::string id, ModelGraph model);
EnsembleMember MemberFromModel(std::string id,
                               std::shared_ptr<const ModelGraph> model);

class EnsembleModel {
 public:
  // Weights are renormalised; they must be non-negative with positive sum.
  EnsembleModel(std::vector<EnsembleMember> members, std::vector<double> alpha,
                CombineRule rule, int num_classes);

  // Weighted-soft: sum_m alpha_m p_m. Hard-majority: vote shares.
  Vector PredictProba(const TokenList& tokens) const;
  int Predict(const TokenList& tokens) const;

  const std::vector<EnsembleMember>& members() const { return members_; }
  const std::vector<double>& alpha() const { return alpha_; }
  CombineRule rule() const { return rule_; }
  int num_classes() const { return num_classes_; }

 private:
  std::vector<Vector> MemberOutputs(const TokenList& tokens) const;

  std::vector<EnsembleMember> members_;
  std::vector<double> alpha_;
  CombineRule rule_;
  int num_classes_;
};

struct CvOptions {
  int folds = 5;
  uint64_t fold_seed = 0;
  CombineRule rule = CombineRule::kWeightedSoft;
  // > 0 replaces the F1 weights with the best point of a simplex grid with
  // this many steps per unit, scored by ensemble macro-F1 on `validation`.
  int grid_steps = 0;
  const LabeledCorpus* validation = nullptr;
};

struct CvResult {
  std::vector<std::shared_ptr<const ModelGraph>> models;
  std::vector<double> fold_f1;  // each on its own held-out fold
  std::vector<double> alpha;
  EnsembleModel ensemble;
};

// Trains one model per fold on the remaining folds.
CvResult CvTrain(const LabeledCorpus& corpus, const ModelSpec& spec,
                 const Vocabulary& vocab, const TrainConfig& config,
                 const CvOptions& options);

struct EnsembleManifest {
  struct Member {
    std::string id;
    std::string checkpoint;
  };
  std::vector<Member> members;
  std::vector<double> alpha;
  CombineRule rule = CombineRule::kWeightedSoft;
  std::vector<CandidateScore> scores;
};

nlohmann::json ManifestToJson(const EnsembleManifest& manifest);
EnsembleManifest ManifestFromJson(const nlohmann::json& j);

// Loads member checkpoints; relative paths resolve against `base_dir`.
EnsembleModel LoadEnsemble(const EnsembleManifest& manifest,
                           const std::string& base_dir);

}  // namespace hatex

#endif  // HATEX_ENSEMBLE_H_
