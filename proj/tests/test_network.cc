#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "hatex/baselines.h"
#include "hatex/checkpoint.h"
#include "hatex/corpus.h"
#include "hatex/train.h"
#include "support.h"

using namespace hatex;
using namespace hatex::testing;

namespace {

ModelSpec TinySpec() {
  ModelSpec spec;
  spec.input = {InputSpec::Kind::kTokens, 6};
  spec.layers = {LayerSpec::Embedding(16), LayerSpec::Flatten(), LayerSpec::Dense(8),
                 LayerSpec::Softmax(4)};
  return spec;
}

double MaxRelError(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double x = a.data()[i];
    const double y = b.data()[i];
    worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-6}));
  }
  return worst;
}

}  // namespace

TEST_CASE("build examples") {
  ModelGraph m(TinySpec(), SmallVocab(10), ClassNames(4), 1);
  CHECK(m.num_classes() == 4);

  ModelSpec no_embed = TinySpec();
  no_embed.layers.erase(no_embed.layers.begin(), no_embed.layers.begin() + 2);
  CHECK_THROWS_WITH_AS(ModelGraph(no_embed, SmallVocab(10), ClassNames(4), 1),
                       doctest::Contains("Dense(8"), BuildError);

  ModelSpec mismatch = TinySpec();
  mismatch.layers.back() = LayerSpec::Softmax(3);
  CHECK_THROWS_AS(ModelGraph(mismatch, SmallVocab(10), ClassNames(4), 1), BuildError);

  ModelSpec bad_chain = TinySpec();
  bad_chain.layers.erase(bad_chain.layers.begin() + 1);
  CHECK_THROWS_WITH_AS(ModelGraph(bad_chain, SmallVocab(10), ClassNames(4), 1),
                       doctest::Contains("Flatten"), BuildError);

  ModelGraph a(TinySpec(), SmallVocab(10), ClassNames(4), 7);
  ModelGraph b(TinySpec(), SmallVocab(10), ClassNames(4), 7);
  const auto pa = a.Parameters();
  const auto pb = b.Parameters();
  for (size_t i = 0; i < pa.size(); ++i) CHECK(*pa[i] == *pb[i]);
}

TEST_CASE("architectures build") {
  ArchitectureOptions o;
  o.max_len = 12;
  o.embedding_dim = 8;
  o.conv_filters = 4;
  o.lstm_units = 3;
  o.dense_units = 5;
  for (const std::string name : {"cnn", "bilstm", "conv-lstm"}) {
    ModelGraph m(ArchitectureSpec(name, 4, o), SmallVocab(20), ClassNames(4), 3);
    CHECK(m.PredictProba({"t1", "t2"}).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS(ArchitectureSpec("transformer", 4, o));
}

TEST_CASE("forward is a distribution and eval mode is deterministic") {
  std::mt19937_64 rng(4);
  for (int arch = 0; arch < kArchitectureCount; ++arch) {
    const ModelGraph m = RandomModel(arch, rng);
    const auto ids = RandomIds(m, rng);
    const ForwardTrace t1 = m.Forward(ids);
    const ForwardTrace t2 = m.Forward(ids);
    CHECK(std::abs(t1.probs.sum() - 1.0) < 1e-9);
    CHECK(t1.logits == t2.logits);
    const std::vector<int> pads(static_cast<size_t>(m.input_length()), Vocabulary::kPad);
    CHECK(std::abs(m.Forward(pads).probs.sum() - 1.0) < 1e-9);
    CHECK_THROWS_AS(m.Forward(std::vector<int>{2}), ContractError);
    // Replaying a layer from its recorded input reproduces its output.
    for (size_t i = 0; i < t1.records.size(); ++i) {
      LayerRecord again;
      m.layers()[i]->Forward(t1.records[i].input, false, nullptr, &again);
      CHECK(again.output == t1.records[i].output);
    }
  }
}

TEST_CASE("train mode noise only when training") {
  std::mt19937_64 rng(5);
  const ModelGraph m = RandomModel(4, rng);
  const auto ids = RandomIds(m, rng);
  std::mt19937_64 train_rng(1);
  const ForwardTrace noisy = m.Forward(ids, Mode::kTrain, &train_rng);
  CHECK(noisy.logits != m.Forward(ids).logits);
}

TEST_CASE("linear probe gradient is the weight vector") {
  ModelSpec spec;
  spec.input = {InputSpec::Kind::kTokens, 2};
  spec.layers = {LayerSpec::Embedding(1), LayerSpec::Flatten(),
                 LayerSpec::Softmax(2)};
  ModelGraph m(spec, SmallVocab(4), ClassNames(2), 1);
  auto params = m.Parameters();
  *params[1] << 3.0, 0.5, -2.0, 1.0;
  const Matrix x = m.Embed(m.Encode({"t0", "t1"}));
  const Matrix g = m.InputGradient(x, 0);
  CHECK(g(0, 0) == 3.0);
  CHECK(g(1, 0) == -2.0);
}

TEST_CASE("input gradients match central differences") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelGraph m = RandomModel(trial, rng);
    const Matrix x = m.Embed(RandomIds(m, rng, true));
    const int c = static_cast<int>(rng() % 3);
    const Matrix g = m.InputGradient(x, c);
    Matrix numeric(x.rows(), x.cols());
    const double h = 1e-5;
    for (Index i = 0; i < x.size(); ++i) {
      Matrix up = x;
      Matrix down = x;
      up.data()[i] += h;
      down.data()[i] -= h;
      numeric.data()[i] =
          (m.ForwardInput(up).logits(c) - m.ForwardInput(down).logits(c)) / (2 * h);
    }
    CHECK(MaxRelError(g, numeric) < 1e-4);
  }
}

TEST_CASE("parameter gradients of the loss match central differences") {
  std::mt19937_64 rng(123);
  for (int arch = 0; arch < kArchitectureCount; ++arch) {
    ModelGraph m = RandomModel(arch, rng);
    const auto ids = RandomIds(m, rng, true);
    const int y = 1;
    const ForwardTrace trace = m.Forward(ids);
    RowVector grad = trace.probs;
    grad(y) -= 1.0;
    std::vector<Matrix> grads = m.ZeroGradients();
    m.Backward(trace, grad, &grads);
    auto params = m.Parameters();
    const double h = 1e-5;
    // Skip the embedding (index 0); it is covered through input gradients.
    for (size_t p = 1; p < params.size(); ++p) {
      Matrix numeric(params[p]->rows(), params[p]->cols());
      for (Index i = 0; i < params[p]->size(); ++i) {
        const double keep = params[p]->data()[i];
        params[p]->data()[i] = keep + h;
        const double up = -std::log(m.Forward(ids).probs(y));
        params[p]->data()[i] = keep - h;
        const double down = -std::log(m.Forward(ids).probs(y));
        params[p]->data()[i] = keep;
        numeric.data()[i] = (up - down) / (2 * h);
      }
      CHECK(MaxRelError(grads[p], numeric) < 1e-4);
    }
    CHECK(grads[0].row(Vocabulary::kPad).isZero());
  }
}

TEST_CASE("training lowers the loss and is deterministic") {
  SynthSpec s;
  s.docs_per_class = 20;
  s.noise_length = 6;
  s.vocab_size = 30;
  s.seed = 2;
  const LabeledCorpus corpus = SynthCorpus(s);
  const Vocabulary vocab = BuildVocabulary(corpus, 1000);
  ArchitectureOptions o;
  o.max_len = 10;
  o.embedding_dim = 8;
  o.conv_filters = 8;
  o.dense_units = 8;
  const ModelSpec spec = ArchitectureSpec("cnn", 4, o);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 8;
  cfg.optimizer = OptimizerKind::kAdam;
  cfg.learning_rate = 0.01;
  cfg.seed = 3;

  ModelGraph a(spec, vocab, corpus.class_names, 1);
  const TrainHistory h = Train(a, corpus, cfg);
  REQUIRE(h.epochs.size() == 10);
  CHECK(h.epochs.back().loss < h.epochs.front().loss);

  ModelGraph b(spec, vocab, corpus.class_names, 1);
  Train(b, corpus, cfg);
  const auto pa = a.Parameters();
  const auto pb = b.Parameters();
  for (size_t i = 0; i < pa.size(); ++i) CHECK(*pa[i] == *pb[i]);

  ModelGraph frozen(spec, vocab, corpus.class_names, 1);
  const ModelGraph before = frozen;
  TrainConfig zero = cfg;
  zero.learning_rate = 0.0;
  zero.epochs = 2;
  Train(frozen, corpus, zero);
  const auto pf = frozen.Parameters();
  const auto p0 = before.Parameters();
  for (size_t i = 0; i < pf.size(); ++i) CHECK(*pf[i] == *p0[i]);

  TrainConfig adagrad = cfg;
  adagrad.optimizer = OptimizerKind::kAdagrad;
  adagrad.learning_rate = 0.05;
  adagrad.epochs = 40;
  adagrad.clip_norm = 1.0;
  ModelGraph c(spec, vocab, corpus.class_names, 1);
  const TrainHistory hc = Train(c, corpus, adagrad);
  CHECK(hc.epochs.back().loss < hc.epochs.front().loss);

  TrainConfig bad = cfg;
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.Validate(), ContractError);
}

TEST_CASE("divergence names the epoch") {
  SynthSpec s;
  s.docs_per_class = 5;
  s.noise_length = 3;
  s.vocab_size = 10;
  const LabeledCorpus corpus = SynthCorpus(s);
  ModelSpec spec = TinySpec();
  spec.input.length = 5;
  ModelGraph m(spec, BuildVocabulary(corpus, 100), corpus.class_names, 1);
  TrainConfig cfg;
  cfg.learning_rate = 1e300;
  cfg.optimizer = OptimizerKind::kAdam;
  cfg.epochs = 3;
  CHECK_THROWS_WITH_AS(Train(m, corpus, cfg), doctest::Contains("epoch"), Error);
}

TEST_CASE("checkpoint round trip is bit exact") {
  std::mt19937_64 rng(31);
  std::filesystem::create_directories(HATEX_TEST_TMP);
  for (int arch = 0; arch < kArchitectureCount; ++arch) {
    const ModelGraph m = RandomModel(arch, rng);
    const std::string path = std::string(HATEX_TEST_TMP) + "/m" + std::to_string(arch) + ".json";
    SaveModel(m, path);
    const ModelGraph back = LoadModel(path);
    const auto ids = RandomIds(m, rng);
    CHECK(back.Forward(ids).logits == m.Forward(ids).logits);
    CHECK(back.vocab().tokens() == m.vocab().tokens());
    CHECK(back.spec().layers == m.spec().layers);
  }
  CHECK_THROWS(LoadModel(std::string(HATEX_TEST_TMP) + "/missing.json"));
}

TEST_CASE("naive bayes") {
  // Three documents over two features; alpha = 1.
  //   d0 = (2, 0) class 0, d1 = (1, 1) class 0, d2 = (0, 3) class 1
  std::vector<Eigen::Triplet<Real>> trip = {{0, 0, 2}, {1, 0, 1}, {1, 1, 1}, {2, 1, 3}};
  SparseMatrix x(3, 2);
  x.setFromTriplets(trip.begin(), trip.end());
  const NaiveBayes nb = NaiveBayes::Fit(x, {0, 0, 1}, 2);
  // theta_0 = ((3+1)/(4+2), (1+1)/(4+2)), theta_1 = (1/5, 4/5)
  SparseVector q(2);
  q.insert(0) = 1.0;
  q.insert(1) = 2.0;
  const double s0 = (2.0 / 3.0) * (4.0 / 6.0) * std::pow(2.0 / 6.0, 2);
  const double s1 = (1.0 / 3.0) * (1.0 / 5.0) * std::pow(4.0 / 5.0, 2);
  const Vector p = nb.PredictProba(q);
  CHECK(p(0) == doctest::Approx(s0 / (s0 + s1)).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(s1 / (s0 + s1)).epsilon(1e-12));

  SparseVector a(2);
  a.insert(0) = 1.0;
  CHECK(nb.Predict(a) == 0);

  std::vector<Eigen::Triplet<Real>> sym = {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}};
  SparseMatrix u(2, 2);
  u.setFromTriplets(sym.begin(), sym.end());
  const Vector flat = NaiveBayes::Fit(u, {0, 1}, 2).PredictProba(a);
  CHECK(flat(0) == doctest::Approx(0.5));

  CHECK_THROWS_WITH(NaiveBayes::Fit(x, {0, 0, 0}, 2), doctest::Contains("prior"));
  const NaiveBayes back = NaiveBayes::FromJson(nb.ToJson());
  CHECK(back.PredictProba(q) == p);
}

TEST_CASE("log norm") {
  Matrix ten(1, 1);
  ten << 10.0;
  std::vector<const Matrix*> one = {&ten};
  CHECK(LogNorm(one) == doctest::Approx(2.0).epsilon(1e-15));
  Matrix zero = Matrix::Zero(2, 2);
  std::vector<const Matrix*> z = {&zero};
  CHECK(LogNorm(z) == -30.0);

  std::mt19937_64 rng(3);
  ModelGraph m = RandomModel(0, rng);
  const double base = LogNorm(m);
  for (Matrix* p : m.Parameters()) *p *= 10.0;
  CHECK(LogNorm(m) == doctest::Approx(base + 2.0).epsilon(1e-12));
}

TEST_CASE("softmax regression baseline on features") {
  const ModelGraph lr = BuildSoftmaxRegression(5, ClassNames(3), 1);
  CHECK_FALSE(lr.token_input());
  RowVector f = RowVector::Zero(5);
  f(1) = 1.0;
  CHECK(lr.PredictProbaFeatures(f).sum() == doctest::Approx(1.0));
}
