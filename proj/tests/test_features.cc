#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "hatex/features.h"

using namespace hatex;

namespace {

LabeledCorpus FromTokens(const std::vector<TokenList>& docs) {
  LabeledCorpus c;
  c.class_names = {"a", "b"};
  for (size_t i = 0; i < docs.size(); ++i) {
    Document d;
    d.id = std::to_string(i);
    d.tokens = docs[i];
    d.label = static_cast<int>(i % 2);
    c.documents.push_back(d);
  }
  return c;
}

std::string WriteTemp(const std::string& name, const std::string& body) {
  std::filesystem::create_directories(HATEX_TEST_TMP);
  const std::string path = std::string(HATEX_TEST_TMP) + "/" + name;
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

// ASCII-only brute force: word keys plus every substring of the
// space-joined text with length in [lo, hi].
std::map<std::string, int> OracleCounts(const TokenList& tokens, int lo, int hi) {
  std::map<std::string, int> counts;
  std::string text;
  for (const auto& t : tokens) {
    counts["w:" + t] += 1;
    if (!text.empty()) text += ' ';
    text += t;
  }
  for (int n = lo; n <= hi; ++n) {
    for (int s = 0; s + n <= static_cast<int>(text.size()); ++s) {
      counts["c:" + text.substr(static_cast<size_t>(s), static_cast<size_t>(n))] += 1;
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("vocabulary ranking and truncation") {
  const LabeledCorpus c = FromTokens({{"j", "i", "h", "g", "f", "e", "d", "c", "b", "a"},
                                      {"a", "b", "c", "d", "e"},
                                      {"a", "b", "c"}});
  const Vocabulary v = BuildVocabulary(c, 5);
  CHECK(v.size() == 7);
  CHECK(v.token(Vocabulary::kPad) == kPadToken);
  CHECK(v.token(Vocabulary::kUnk) == kUnkToken);
  CHECK(v.tokens() == std::vector<std::string>{"<pad>", "<unk>", "a", "b", "c", "d", "e"});
  CHECK(v.index("zzz") == Vocabulary::kUnk);

  const Vocabulary ties = BuildVocabulary(FromTokens({{"zeta", "alpha"}}), 1);
  CHECK(ties.token(2) == "alpha");
  CHECK_THROWS_AS(BuildVocabulary(LabeledCorpus{}, 5), ContractError);

  const std::vector<int> ids = v.Encode({"a", "nope"}, 4);
  CHECK(ids == std::vector<int>{2, Vocabulary::kUnk, 0, 0});
}

TEST_CASE("tf-idf fitting examples") {
  const TfIdfModel m = FitTfIdf(FromTokens({{"shared", "x"}, {"shared", "y"}}), {2, 3, true});
  CHECK(m.document_frequency()[static_cast<size_t>(m.feature_index("w:shared"))] == 2);

  const TfIdfModel ab = FitTfIdf(FromTokens({{"ab"}}), {2, 3, false});
  CHECK(ab.features() == std::vector<std::string>{"c:ab"});

  const TfIdfModel chars = FitTfIdf(FromTokens({{"ab", "c"}}), {1, 1, false});
  CHECK(chars.features() == std::vector<std::string>{"c: ", "c:a", "c:b", "c:c"});

  const TfIdfModel single = FitTfIdf(FromTokens({{"q", "r"}}), {2, 5, true});
  for (int f = 0; f < single.num_features(); ++f) CHECK(single.idf(f) == 1.0);
}

TEST_CASE("tf-idf code-point aware n-grams") {
  const std::string bn = "\xE0\xA6\x86\xE0\xA6\xAE";  // two code points
  const auto counts = ExtractFeatureCounts({bn}, {1, 2, false});
  CHECK(counts.size() == 3);
  CHECK(counts.count("c:" + bn) == 1);
}

TEST_CASE("tf-idf transform matches brute force") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> words = {"ab", "bc", "abc", "x", "yy", "zab"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TokenList> docs(5);
    for (auto& d : docs) {
      const int n = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < n; ++i) d.push_back(words[rng() % words.size()]);
    }
    const LabeledCorpus corpus = FromTokens(docs);
    const TfIdfModel model = FitTfIdf(corpus, {2, 3, true});

    std::map<std::string, int> df;
    for (const auto& d : docs) {
      for (const auto& [k, v] : OracleCounts(d, 2, 3)) df[k] += 1;
    }
    CHECK(static_cast<size_t>(model.num_features()) == df.size());

    for (size_t i = 0; i < docs.size(); ++i) {
      const auto tf = OracleCounts(docs[i], 2, 3);
      std::map<std::string, double> w;
      double norm = 0.0;
      for (const auto& [k, count] : tf) {
        const double idf = std::log((1.0 + 5.0) / (1.0 + df[k])) + 1.0;
        w[k] = count * idf;
        norm += w[k] * w[k];
      }
      norm = std::sqrt(norm);
      const SparseVector v = TransformTfIdf(model, corpus.documents[i]);
      CHECK(v.nonZeros() == static_cast<Index>(w.size()));
      for (const auto& [k, value] : w) {
        CHECK(v.coeff(model.feature_index(k)) == doctest::Approx(value / norm).epsilon(1e-12));
      }
      CHECK(std::abs(v.norm() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("tf-idf unseen features dropped") {
  const TfIdfModel model = FitTfIdf(FromTokens({{"aa"}, {"bb"}}), {2, 2, true});
  Document d;
  d.id = "q";
  d.tokens = {"zz"};
  CHECK(TransformTfIdf(model, d).nonZeros() == 0);
  const SparseMatrix all = TransformTfIdf(model, FromTokens({{"aa"}, {"bb", "aa"}}));
  CHECK(all.rows() == 2);
  CHECK(all.cols() == model.num_features());
}

TEST_CASE("embedding table loader") {
  const auto ok = WriteTemp("vec.txt", "2 3\nfoo 1 2 3\nbar 0.5 -1 2e-1\n");
  const EmbeddingTable t = LoadEmbeddingTable(ok);
  CHECK(t.size() == 2);
  CHECK(t.dim() == 3);
  CHECK(t.Lookup("bar")(2) == doctest::Approx(0.2));
  CHECK(t.Lookup("unknown").isZero());
  CHECK(t.Lookup(std::string(kPadToken)).isZero());

  const auto short_row = WriteTemp("short.txt", "2 3\nfoo 1 2 3\nbar 1 2\n");
  CHECK_THROWS_WITH_AS(LoadEmbeddingTable(short_row), doctest::Contains("short.txt:3"), FormatError);
  const auto count = WriteTemp("count.txt", "3 2\nfoo 1 2\n");
  CHECK_THROWS_AS(LoadEmbeddingTable(count), FormatError);

  EmbeddingTable mean(2, UnknownPolicy::kMean);
  mean.Add("a", Vector::Constant(2, 1.0));
  mean.Add("b", Vector::Constant(2, 3.0));
  CHECK(mean.Lookup("zzz")(0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(mean.Add("a", Vector::Zero(2)), ContractError);
}

TEST_CASE("embed sequence") {
  EmbeddingTable t(300);
  Vector v = Vector::LinSpaced(300, 0.0, 1.0);
  t.Add("a", v);
  t.Add("b", -v);
  t.Add("c", 2 * v);
  const Matrix m = EmbedSequence({"a", "b", "c"}, t);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 300);
  const Matrix swapped = EmbedSequence({"c", "a", "b"}, t);
  CHECK(swapped.row(0) == m.row(2));
  CHECK(swapped.row(1) == m.row(0));
  const std::string pad(kPadToken);
  CHECK(EmbedSequence({pad, pad}, t).isZero());
  CHECK(EmbedSequence({"nope"}, t).isZero());
}
