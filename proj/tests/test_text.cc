#include <doctest.h>

#include <random>

#include "hatex/text.h"

using namespace hatex;

namespace {

TokenList Run(std::string_view raw) { return Preprocess(raw, PreprocessConfig{}); }

}  // namespace

TEST_CASE("hashtag marker dropped, mention and duplicate removed") {
  CHECK(Run("#justice now now @user") == TokenList{"justice", "now"});
}

TEST_CASE("emoji-only text is empty") {
  CHECK(Run("\xF0\x9F\x98\x80 \xF0\x9F\x98\xA1\xF0\x9F\x91\x8D\xF0\x9F\x8F\xBD").empty());
  CHECK(Run(":) :-( <3").empty());
}

TEST_CASE("lowercase then collapse duplicates") {
  CHECK(Run("He SAID said") == TokenList{"he", "said"});
}

TEST_CASE("punctuation separates, bengali script survives") {
  CHECK(Run("hello,world!") == TokenList{"hello", "world"});
  const std::string bn = "\xE0\xA6\x86\xE0\xA6\xAE\xE0\xA6\xBF \xE0\xA6\xA4\xE0\xA7\x81\xE0\xA6\xAE\xE0\xA6\xBF";
  CHECK(Run(bn).size() == 2);
}

TEST_CASE("flags switch rules off") {
  PreprocessConfig cfg;
  cfg.normalize_hashtags = false;
  cfg.strip_emojis_mentions_duplicates = false;
  cfg.lowercase = false;
  CHECK(Preprocess("#Tag x x", cfg) == TokenList{"#Tag", "x", "x"});
}

TEST_CASE("stemmer runs last") {
  PreprocessConfig cfg;
  cfg.stemmer = [](const std::string& t) { return t.substr(0, 3); };
  CHECK(Preprocess("Running runner", cfg) == TokenList{"run", "run"});
}

TEST_CASE("preprocess is idempotent on random mixed text") {
  const std::vector<std::string> pieces = {
      "a", "B", "#tag", "@who", " ", "  ", ",", "!", ":)", "\xF0\x9F\x98\x80",
      "\xE0\xA6\x86\xE0\xA6\xAE\xE0\xA6\xBF", "x", "x", "\t", "dup", "dup", "-", "'"};
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<size_t> pick(0, pieces.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::string raw;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) raw += pieces[pick(rng)];
    const TokenList once = Run(raw);
    CHECK(Run(JoinTokens(once)) == once);
  }
}

TEST_CASE("fit_length") {
  TokenList long_list;
  for (int i = 0; i < 120; ++i) long_list.push_back("w" + std::to_string(i));
  FittedSequence head = FitLength(long_list, 100);
  CHECK(head.tokens.size() == 100);
  CHECK(head.tokens.front() == "w0");
  CHECK(head.tokens.back() == "w99");

  TokenList exact(long_list.begin(), long_list.begin() + 100);
  CHECK(FitLength(exact, 100).tokens == exact);

  FittedSequence padded = FitLength({"a", "b", "c"}, 5);
  CHECK(padded.mask == std::vector<int>{1, 1, 1, 0, 0});
  CHECK(padded.tokens[3] == kPadToken);

  CHECK_THROWS_AS(FitLength({"a"}, 0), ContractError);
  for (int len = 1; len < 30; ++len) CHECK(FitLength(long_list, len).tokens.size() == size_t(len));
}

TEST_CASE("config validation") {
  PreprocessConfig cfg;
  cfg.min_df = 0;
  CHECK_THROWS_AS(cfg.Validate(), ContractError);
  cfg.min_df = 5;
  cfg.max_len = 0;
  CHECK_THROWS_AS(cfg.Validate(), ContractError);
}
