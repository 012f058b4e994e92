#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_config.h"
#include "commands.h"

using namespace hatex::cli;
namespace fs = std::filesystem;

namespace {

fs::path Tmp(const std::string& name) {
  const fs::path dir = fs::path(HATEX_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string WriteFile(const std::string& name, const std::string& body) {
  const fs::path p = Tmp(name);
  std::ofstream(p) << body;
  return p.string();
}

int Run(std::vector<std::string> args) {
  args.insert(args.begin(), "hatex");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data());
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal config gets the defaults") {
  const RunConfig c = ResolveConfig(WriteFile("min.cfg", "[data]\ncorpus = x.csv\n"), {});
  CHECK(c.data.corpus == "x.csv");
  CHECK(c.preprocess.max_len == 100);
  CHECK(c.preprocess.min_df == 5);
  CHECK(c.faithfulness.p == 0.2);
}

TEST_CASE("every violation is reported in one pass") {
  const std::string path =
      WriteFile("bad.cfg", "[preprocess]\nmax_len = 0\n[model]\narhc = cnn\n[train]\nepochs = ten\n");
  try {
    ResolveConfig(path, {});
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    REQUIRE(e.problems().size() == 3);
    CHECK(std::string(e.what()).find("max_len") != std::string::npos);
    CHECK(std::string(e.what()).find("model.arhc") != std::string::npos);
    CHECK(std::string(e.what()).find("train.epochs") != std::string::npos);
  }
  CHECK_THROWS_AS(ResolveConfig("", {{"preprocess.max_len", "0"}}), UsageError);
  CHECK_THROWS_AS(ResolveConfig("", {{"model.conv_width", "9"}, {"preprocess.max_len", "4"}}),
                  UsageError);
}

TEST_CASE("flags override the file") {
  const std::string path = WriteFile("o.cfg", "[train]\nepochs = 3\nlearning_rate = 0.5\n");
  const RunConfig c = ResolveConfig(path, {{"train.epochs", "7"}});
  CHECK(c.train.epochs == 7);
  CHECK(c.train.learning_rate == 0.5);
}

TEST_CASE("snapshot covers every key and replays") {
  RunConfig c;
  c.data.classes = {"a", "b"};
  c.run.seed = 42;
  const auto j = ConfigToJson(c);
  std::vector<std::pair<std::string, std::string>> replay;
  for (const auto& key : ConfigKeys()) {
    const auto dot = key.find('.');
    const auto& v = j.at(key.substr(0, dot)).at(key.substr(dot + 1));
    std::string text;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_array()) {
      for (const auto& x : v) text += (text.empty() ? "" : ",") + x.get<std::string>();
    } else {
      text = v.dump();
    }
    replay.emplace_back(key, text);
  }
  const RunConfig back = ResolveConfig("", replay);
  CHECK(ConfigToJson(back) == j);
}

TEST_CASE("exit codes and manifest") {
  const fs::path out = Tmp("synth");
  fs::remove_all(out);
  CHECK(Run({"synth", "--per-class", "4", "--vocab", "6", "--noise-length", "3", "-o",
             out.string()}) == 0);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "corpus.csv"));

  CHECK(Run({"train", "--bogus"}) == 2);
  CHECK(Run({"train", "-o", Tmp("none").string()}) == 2);
  CHECK(Run({"train", "--corpus", (out / "corpus.csv").string(), "--epochs", "0", "-o",
             Tmp("none").string()}) == 2);

  // A runtime failure still leaves the manifest behind.
  const fs::path failed = Tmp("failed");
  fs::remove_all(failed);
  CHECK(Run({"train", "--corpus", (out / "missing.csv").string(), "-o", failed.string()}) == 1);
  CHECK(fs::exists(failed / "manifest.json"));
}

TEST_CASE("two identical runs write identical reports") {
  const fs::path data = Tmp("det-data");
  REQUIRE(Run({"synth", "--per-class", "12", "--vocab", "20", "--noise-length", "5", "--seed",
               "4", "-o", data.string()}) == 0);
  const std::string cfg = WriteFile(
      "det.cfg", "[data]\ncorpus = " + (data / "corpus.csv").string() +
                     "\n[preprocess]\nmax_len = 12\nmin_df = 2\n[model]\narch = cnn\n"
                     "embedding_dim = 6\nconv_filters = 4\ndense_units = 4\n"
                     "[train]\nepochs = 2\n[run]\nseed = 9\n");
  std::vector<std::string> reports;
  for (const char* run : {"det-a", "det-b"}) {
    const fs::path out = Tmp(run);
    fs::remove_all(out);
    REQUIRE(Run({"train", "-c", cfg, "-o", out.string()}) == 0);
    REQUIRE(Run({"explain", "-c", cfg, "-m", (out / "checkpoints/model.json").string(),
                 "--limit", "3", "-o", out.string()}) == 0);
    std::string all = Slurp(out / "metrics.json");
    for (const auto& e : fs::directory_iterator(out / "relevance")) all += Slurp(e.path());
    reports.push_back(all);
  }
  CHECK(reports[0] == reports[1]);
}
