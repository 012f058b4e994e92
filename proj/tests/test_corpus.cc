#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "hatex/corpus.h"

using namespace hatex;
namespace fs = std::filesystem;

namespace {

std::string WriteTemp(const std::string& name, const std::string& body) {
  fs::create_directories(HATEX_TEST_TMP);
  const std::string path = std::string(HATEX_TEST_TMP) + "/" + name;
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

Document Doc(std::string id, TokenList tokens, int label) {
  Document d;
  d.id = std::move(id);
  d.tokens = std::move(tokens);
  d.label = label;
  return d;
}

LabeledCorpus Balanced(int k, int per_class) {
  LabeledCorpus c;
  for (int i = 0; i < k; ++i) c.class_names.push_back("c" + std::to_string(i));
  int id = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < per_class; ++j) {
      c.documents.push_back(Doc(std::to_string(id++), {"x"}, i));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("load four rows, two labels") {
  const auto path = WriteTemp("four.csv",
                              "id,text,label\n"
                              "a,\"I, me\",personal\n"
                              "b,vote now,political\n"
                              "c,#x y,personal\n"
                              "d,z,political\n");
  const LabeledCorpus c = LoadCorpus(path, CorpusSchema{});
  CHECK(c.size() == 4);
  CHECK(c.num_classes() == 2);
  CHECK(c.documents[0].id == "a");
  CHECK(c.documents[0].tokens == TokenList{"i", "me"});
  CHECK(c.documents[2].tokens == TokenList{"x", "y"});
  CHECK(c.class_names == std::vector<std::string>{"personal", "political"});
}

TEST_CASE("empty file") {
  const auto path = WriteTemp("empty.csv", "");
  CHECK_THROWS_WITH_AS(LoadCorpus(path, CorpusSchema{}), doctest::Contains("no documents"),
                       FormatError);
  const auto header_only = WriteTemp("header.csv", "id,text,label\n");
  CHECK_THROWS_WITH_AS(LoadCorpus(header_only, CorpusSchema{}),
                       doctest::Contains("no documents"), FormatError);
}

TEST_CASE("unknown label names the row") {
  const auto path = WriteTemp("sports.csv",
                              "id,text,label\n"
                              "r1,a,personal\n"
                              "r2,b,sports\n");
  CorpusSchema schema;
  schema.class_names = {"personal", "political", "religious", "geopolitical"};
  CHECK_THROWS_WITH_AS(LoadCorpus(path, schema), doctest::Contains("r2"), LabelError);
}

TEST_CASE("missing column") {
  const auto path = WriteTemp("nolabel.csv", "id,text\n1,a\n");
  CHECK_THROWS_AS(LoadCorpus(path, CorpusSchema{}), FormatError);
}

TEST_CASE("rationale column") {
  const auto path = WriteTemp("rat.csv",
                              "id,text,label,rationale\n"
                              "1,a b c,x,0;2\n"
                              "2,d e,y,\n");
  const LabeledCorpus c = LoadCorpus(path, CorpusSchema{});
  REQUIRE(c.documents[0].gold_rationale);
  CHECK(*c.documents[0].gold_rationale == std::vector<int>{0, 2});
  CHECK_FALSE(c.documents[1].gold_rationale);
  const auto bad = WriteTemp("badrat.csv", "id,text,label,rationale\n1,a b,x,5\n2,c,y,\n");
  CHECK_THROWS_AS(LoadCorpus(bad, CorpusSchema{}), FormatError);
}

TEST_CASE("csv round trip") {
  LabeledCorpus c = Balanced(2, 2);
  c.documents[0].tokens = {"p", "q"};
  c.documents[0].raw = "p, q";
  c.documents[0].gold_rationale = std::vector<int>{1};
  const std::string path = std::string(HATEX_TEST_TMP) + "/rt.csv";
  fs::create_directories(HATEX_TEST_TMP);
  WriteCorpusCsv(c, path);
  const LabeledCorpus back = LoadCorpus(path, CorpusSchema{});
  CHECK(back.size() == 4);
  CHECK(back.documents[0].tokens == TokenList{"p", "q"});
  CHECK(*back.documents[0].gold_rationale == std::vector<int>{1});
}

TEST_CASE("filter_infrequent") {
  LabeledCorpus c = Balanced(2, 5);
  for (size_t i = 0; i < c.size(); ++i) {
    c.documents[i].tokens = {"common"};
    if (i < 4) c.documents[i].tokens.push_back("rare");
  }
  c.documents[9].tokens = {"solo"};
  c.documents[0].gold_rationale = std::vector<int>{1};
  c.documents[1].tokens = {"rare2", "common"};
  c.documents[1].gold_rationale = std::vector<int>{1};

  const LabeledCorpus f = FilterInfrequent(c, 5);
  std::map<std::string, int> df;
  for (const auto& d : f.documents) {
    for (const auto& t : std::set<std::string>(d.tokens.begin(), d.tokens.end())) ++df[t];
  }
  for (const auto& [token, n] : df) CHECK(n >= 5);
  CHECK(df.count("rare") == 0);
  CHECK(f.documents[9].empty);
  CHECK(f.documents[9].tokens.empty());
  CHECK(f.size() == c.size());
  CHECK(f.documents[0].gold_rationale->empty());
  CHECK(*f.documents[1].gold_rationale == std::vector<int>{0});

  const LabeledCorpus same = FilterInfrequent(c, 1);
  for (size_t i = 0; i < c.size(); ++i) CHECK(same.documents[i].tokens == c.documents[i].tokens);
}

TEST_CASE("stratified split 100 docs") {
  const LabeledCorpus c = Balanced(4, 25);
  auto [train, test] = SplitTrainTest(c, 0.2, 3);
  CHECK(train.size() == 80);
  CHECK(test.size() == 20);
  std::map<int, int> per;
  for (const auto& d : test.documents) ++per[d.label];
  for (int k = 0; k < 4; ++k) CHECK(per[k] == 5);
  std::set<std::string> ids;
  for (const auto& d : train.documents) ids.insert(d.id);
  for (const auto& d : test.documents) CHECK(ids.insert(d.id).second);
  CHECK(ids.size() == 100);

  auto [train2, test2] = SplitTrainTest(c, 0.2, 3);
  for (size_t i = 0; i < test.size(); ++i) CHECK(test.documents[i].id == test2.documents[i].id);
}

TEST_CASE("split partition property on random imbalanced corpora") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    LabeledCorpus c;
    c.class_names = {"a", "b", "c"};
    int id = 0;
    std::vector<int> sizes;
    for (int k = 0; k < 3; ++k) {
      const int n = 4 + static_cast<int>(rng() % 20);
      sizes.push_back(n);
      for (int j = 0; j < n; ++j) c.documents.push_back(Doc(std::to_string(id++), {"t"}, k));
    }
    const double frac = 0.15 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    auto [train, test] = SplitTrainTest(c, frac, rng());
    CHECK(train.size() + test.size() == c.size());
    std::map<int, int> per;
    for (const auto& d : test.documents) ++per[d.label];
    for (int k = 0; k < 3; ++k) CHECK(std::abs(per[k] - frac * sizes[k]) <= 1.0);
  }
}

TEST_CASE("split errors") {
  CHECK_THROWS_AS(SplitTrainTest(Balanced(2, 5), 0.999, 1), ContractError);
  LabeledCorpus tiny = Balanced(2, 3);
  tiny.documents.pop_back();
  tiny.documents.pop_back();
  CHECK_THROWS_AS(SplitTrainTest(tiny, 0.5, 1), ContractError);
  CHECK_THROWS_AS(SplitTrainTest(Balanced(2, 5), 0.0, 1), ContractError);
}

TEST_CASE("stratified folds") {
  const LabeledCorpus c = Balanced(3, 10);
  const auto folds = StratifiedFolds(c, 5, 2);
  std::map<std::pair<int, int>, int> cell;
  for (size_t i = 0; i < c.size(); ++i) ++cell[{folds[i], c.documents[i].label}];
  for (int f = 0; f < 5; ++f) {
    for (int k = 0; k < 3; ++k) CHECK(cell[{f, k}] == 2);
  }
}

TEST_CASE("synth corpus") {
  SynthSpec spec;
  spec.seed = 9;
  const LabeledCorpus c = SynthCorpus(spec);
  CHECK(c.size() == 200);
  const auto planted = PlantedTokens(spec);
  for (const auto& d : c.documents) {
    REQUIRE(d.gold_rationale);
    CHECK_FALSE(d.gold_rationale->empty());
    const auto& mine = planted[static_cast<size_t>(d.label)];
    for (int pos : *d.gold_rationale) {
      CHECK(std::find(mine.begin(), mine.end(), d.tokens[static_cast<size_t>(pos)]) != mine.end());
    }
    for (size_t t = 0; t < d.tokens.size(); ++t) {
      const bool in_gold = std::binary_search(d.gold_rationale->begin(), d.gold_rationale->end(),
                                              static_cast<int>(t));
      for (const auto& cls : planted) {
        if (std::find(cls.begin(), cls.end(), d.tokens[t]) != cls.end()) CHECK(in_gold);
      }
    }
  }

  const LabeledCorpus again = SynthCorpus(spec);
  for (size_t i = 0; i < c.size(); ++i) {
    CHECK(c.documents[i].tokens == again.documents[i].tokens);
    CHECK(c.documents[i].label == again.documents[i].label);
  }

  SynthSpec bare = spec;
  bare.noise_length = 0;
  for (const auto& d : SynthCorpus(bare).documents) {
    CHECK(d.gold_rationale->size() == d.tokens.size());
  }

  SynthSpec overlap = spec;
  overlap.num_classes = 2;
  overlap.planted_tokens = {{"x", "y"}, {"y", "z"}};
  CHECK_THROWS_AS(SynthCorpus(overlap), ContractError);
}
