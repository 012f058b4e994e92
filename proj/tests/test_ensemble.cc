#include <doctest.h>

#include <filesystem>
#include <random>

#include "hatex/checkpoint.h"
#include "hatex/ensemble.h"
#include "support.h"

using namespace hatex;
using namespace hatex::testing;

namespace {

Vector V(std::initializer_list<double> v) {
  Vector r(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

EnsembleMember Fixed(std::string id, Vector p) {
  return {std::move(id), [p](const TokenList&) { return p; }};
}

}  // namespace

TEST_CASE("majority vote") {
  const std::vector<Vector> aab = {V({0.6, 0.4}), V({0.7, 0.3}), V({0.2, 0.8})};
  CHECK(MajorityVote(aab) == 0);
  const std::vector<Vector> tie = {V({0.6, 0.4}), V({0.45, 0.55})};
  // mean p(A) = 0.525 > mean p(B) = 0.475
  CHECK(MajorityVote(tie) == 0);
  const std::vector<Vector> tie_b = {V({0.51, 0.49}), V({0.1, 0.9})};
  CHECK(MajorityVote(tie_b) == 1);
  const std::vector<Vector> flat = {V({0.5, 0.5}), V({0.5, 0.5})};
  CHECK(MajorityVote(flat) == 0);
  const std::vector<Vector> same = {V({0.1, 0.2, 0.7}), V({0.1, 0.2, 0.7}), V({0.1, 0.2, 0.7})};
  CHECK(MajorityVote(same) == 2);
  CHECK_THROWS_AS(MajorityVote(std::vector<Vector>{V({1, 0})}), ContractError);
}

TEST_CASE("majority vote is order invariant") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vector> d;
    const int members = 2 + int(rng() % 5);
    for (int m = 0; m < members; ++m) {
      Vector v(3);
      for (int k = 0; k < 3; ++k) v(k) = u(rng);
      d.push_back(v / v.sum());
    }
    const int base = MajorityVote(d);
    std::shuffle(d.begin(), d.end(), rng);
    CHECK(MajorityVote(d) == base);
  }
}

TEST_CASE("select top k") {
  // Relative ordering of four candidates; the weakest is dropped.
  std::vector<CandidateScore> c = {{"xlmr", 0.87, 0.8, 1.0},
                                   {"bert-uncased", 0.86, 0.78, 1.2},
                                   {"mbert-cased", 0.80, 0.7, 1.1},
                                   {"bangla-bert", 0.86, 0.79, 0.9}};
  const auto top = SelectTopK(c, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].id == "xlmr");
  CHECK(top[1].id == "bangla-bert");
  CHECK(top[2].id == "bert-uncased");
  CHECK(SelectTopK(c, 4).back().id == "mbert-cased");
  CHECK_THROWS_AS(SelectTopK(c, 0), ContractError);
  CHECK_THROWS_AS(SelectTopK(c, 5), ContractError);
}

TEST_CASE("f1 weights") {
  const std::vector<double> equal = {0.7, 0.7, 0.7};
  for (double a : F1Weights(equal)) CHECK(a == doctest::Approx(1.0 / 3.0));
  const std::vector<double> one_zero = {0.0, 0.5, 0.5};
  const auto w = F1Weights(one_zero);
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 0.5);
  const std::vector<double> zeros = {0.0, 0.0};
  CHECK(F1Weights(zeros)[0] == 0.5);
}

TEST_CASE("ensemble predict") {
  EnsembleModel soft({Fixed("a", V({0.8, 0.2})), Fixed("b", V({0.6, 0.4}))}, {0.5, 0.5},
                     CombineRule::kWeightedSoft, 2);
  CHECK(soft.PredictProba({}).isApprox(V({0.7, 0.3}), 1e-15));
  EnsembleModel dominant({Fixed("a", V({0.8, 0.2})), Fixed("b", V({0.1, 0.9}))}, {1.0, 0.0},
                         CombineRule::kWeightedSoft, 2);
  CHECK(dominant.PredictProba({}) == V({0.8, 0.2}));
  EnsembleModel doubled({Fixed("a", V({0.8, 0.2})), Fixed("b", V({0.6, 0.4}))}, {1.0, 1.0},
                        CombineRule::kWeightedSoft, 2);
  CHECK(doubled.alpha()[0] == 0.5);
  CHECK(doubled.PredictProba({}) == soft.PredictProba({}));

  EnsembleModel hard({Fixed("a", V({0.6, 0.4})), Fixed("b", V({0.45, 0.55})),
                      Fixed("c", V({0.3, 0.7}))},
                     {1, 1, 1}, CombineRule::kHardMajority, 2);
  CHECK(hard.PredictProba({}).isApprox(V({1.0 / 3, 2.0 / 3})));
  CHECK(hard.Predict({}) == 1);

  CHECK_THROWS_AS(EnsembleModel({Fixed("a", V({1, 0}))}, {1}, CombineRule::kWeightedSoft, 2),
                  ContractError);
  CHECK_THROWS_AS(EnsembleModel({Fixed("a", V({1, 0})), Fixed("b", V({1, 0}))}, {0, 0},
                                CombineRule::kWeightedSoft, 2),
                  ContractError);
  CHECK(ParseCombineRule("hard-majority") == CombineRule::kHardMajority);
}

TEST_CASE("identical members under uniform weights follow the member") {
  std::mt19937_64 rng(10);
  const ModelGraph m = RandomModel(2, rng);
  EnsembleModel e({MemberFromModel("a", m), MemberFromModel("b", m), MemberFromModel("c", m)},
                  {1, 1, 1}, CombineRule::kWeightedSoft, 3);
  for (int i = 0; i < 20; ++i) {
    const TokenList t = TokensOf(m, RandomIds(m, rng));
    CHECK(e.Predict(t) == m.Predict(t));
  }
}

TEST_CASE("cv train and manifest") {
  SynthSpec s;
  s.docs_per_class = 10;
  s.noise_length = 4;
  s.vocab_size = 20;
  s.seed = 4;
  const LabeledCorpus corpus = SynthCorpus(s);
  ArchitectureOptions o;
  o.max_len = 8;
  o.embedding_dim = 6;
  o.conv_filters = 6;
  o.dense_units = 6;
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.learning_rate = 0.05;
  CvOptions cv;
  cv.folds = 3;
  const CvResult r = CvTrain(corpus, ArchitectureSpec("cnn", 4, o), BuildVocabulary(corpus, 100),
                             cfg, cv);
  CHECK(r.models.size() == 3);
  CHECK(r.fold_f1.size() == 3);
  double total = 0.0;
  for (double a : r.alpha) total += a;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.ensemble.members().size() == 3);

  CvOptions grid = cv;
  grid.grid_steps = 4;
  CHECK_THROWS_AS(CvTrain(corpus, ArchitectureSpec("cnn", 4, o), BuildVocabulary(corpus, 100),
                          cfg, grid),
                  ContractError);

  std::filesystem::create_directories(HATEX_TEST_TMP);
  EnsembleManifest manifest;
  manifest.alpha = r.alpha;
  manifest.rule = CombineRule::kHardMajority;
  for (size_t f = 0; f < r.models.size(); ++f) {
    const std::string name = "fold" + std::to_string(f) + ".json";
    SaveModel(*r.models[f], std::string(HATEX_TEST_TMP) + "/" + name);
    manifest.members.push_back({"fold" + std::to_string(f), name});
  }
  const EnsembleManifest back = ManifestFromJson(ManifestToJson(manifest));
  CHECK(back.alpha == manifest.alpha);
  CHECK(back.rule == manifest.rule);
  const EnsembleModel loaded = LoadEnsemble(back, HATEX_TEST_TMP);
  const TokenList t = corpus.documents[0].tokens;
  CHECK(loaded.Predict(t) == EnsembleModel(r.ensemble.members(), r.alpha,
                                           CombineRule::kHardMajority, 4)
                                 .Predict(t));
}
