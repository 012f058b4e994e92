#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "hatex/agreement.h"

using namespace hatex;

namespace {

AnnotationMatrix Make(std::initializer_list<std::initializer_list<int>> rows, int m) {
  Eigen::MatrixXi x(static_cast<Index>(rows.size()),
                    static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (int v : r) x(i, j++) = v;
    ++i;
  }
  return AnnotationMatrix(x, m);
}

// Plain-loop transcription of the proportion, per-category and pooled
// formulas, kept apart from the library code.
std::optional<double> OracleOverall(const std::vector<std::vector<int>>& x, int m) {
  const size_t n = x.size();
  const size_t k = x[0].size();
  double num = 0.0;
  double den = 0.0;
  for (size_t j = 0; j < k; ++j) {
    double col = 0.0;
    for (size_t i = 0; i < n; ++i) col += x[i][j];
    const double p = col / (static_cast<double>(n) * m);
    if (p == 0.0 || p == 1.0) continue;
    double disagreement = 0.0;
    for (size_t i = 0; i < n; ++i) disagreement += x[i][j] * (m - x[i][j]);
    const double kj =
        1.0 - disagreement / (static_cast<double>(n) * m * (m - 1) * p * (1.0 - p));
    num += p * (1.0 - p) * kj;
    den += p * (1.0 - p);
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::vector<std::vector<int>> RandomCounts(std::mt19937_64& rng, int n, int k, int m) {
  std::vector<std::vector<int>> x(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(k), 0));
  std::uniform_int_distribution<int> cat(0, k - 1);
  for (auto& row : x) {
    for (int v = 0; v < m; ++v) ++row[static_cast<size_t>(cat(rng))];
  }
  return x;
}

AnnotationMatrix ToMatrix(const std::vector<std::vector<int>>& x, int m) {
  Eigen::MatrixXi e(static_cast<Index>(x.size()), static_cast<Index>(x[0].size()));
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < x[0].size(); ++j) e(Index(i), Index(j)) = x[i][j];
  }
  return AnnotationMatrix(e, m);
}

}  // namespace

TEST_CASE("proportion examples") {
  CHECK(CategoryProportion(Make({{2, 0}, {0, 2}}, 2), 0) == 0.5);
  CHECK(CategoryProportion(Make({{3, 0}, {3, 0}}, 3), 0) == 1.0);
  const auto half = Make({{1, 1}, {1, 1}}, 2);
  CHECK(CategoryProportion(half, 0) == 0.5);
  CHECK(CategoryProportion(half, 1) == 0.5);
}

TEST_CASE("category kappa examples") {
  CHECK(*CategoryKappa(Make({{2, 0}, {0, 2}}, 2), 0) == 1.0);
  CHECK(*CategoryKappa(Make({{1, 1}, {1, 1}}, 2), 0) == doctest::Approx(-1.0).epsilon(1e-15));
  // Column [3,2,1], m = 3: disagreement 0+2+2 = 4, denominator 3*3*2*(2/3)(1/3) = 4.
  const auto x = Make({{3, 0}, {2, 1}, {1, 2}}, 3);
  CHECK(CategoryProportion(x, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(*CategoryKappa(x, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_FALSE(CategoryKappa(Make({{2, 0}, {2, 0}}, 2), 1).has_value());
}

TEST_CASE("overall kappa examples") {
  CHECK(*OverallKappa(Make({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}}, 3)) == 1.0);
  CHECK(*OverallKappa(Make({{1, 1}, {1, 1}}, 2)) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_FALSE(OverallKappa(Make({{2, 0}, {2, 0}}, 2)).has_value());
  // Degenerate third category is excluded, not fatal.
  CHECK(*OverallKappa(Make({{2, 0, 0}, {0, 2, 0}}, 2)) == 1.0);
}

TEST_CASE("overall kappa against direct transcription") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int m = 2 + static_cast<int>(rng() % 3);
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto x = RandomCounts(rng, n, k, m);
    const auto lib = OverallKappa(ToMatrix(x, m));
    const auto ref = OracleOverall(x, m);
    REQUIRE(lib.has_value() == ref.has_value());
    if (lib) CHECK(std::abs(*lib - *ref) <= 1e-12);
  }
}

TEST_CASE("kappa invariant under row shuffles and category relabelling") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int k = 2 + static_cast<int>(rng() % 3);
    auto x = RandomCounts(rng, n, k, 3);
    const auto base = OverallKappa(ToMatrix(x, 3));
    std::shuffle(x.begin(), x.end(), rng);
    std::vector<size_t> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& row : x) {
      auto copy = row;
      for (size_t j = 0; j < row.size(); ++j) row[j] = copy[perm[j]];
    }
    const auto moved = OverallKappa(ToMatrix(x, 3));
    REQUIRE(base.has_value() == moved.has_value());
    if (base) {
      CHECK(*moved == doctest::Approx(*base).epsilon(1e-12));
      CHECK(*base <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("report sums") {
  const auto rep = ComputeKappaReport(Make({{2, 1, 0}, {0, 1, 2}, {3, 0, 0}}, 3));
  CHECK(rep.p_bar.sum() == doctest::Approx(1.0));
  CHECK(rep.kappa.size() == 3);
}

TEST_CASE("matrix contract") {
  Eigen::MatrixXi bad(1, 2);
  bad << 1, 2;
  CHECK_THROWS_AS(AnnotationMatrix(bad, 2), ContractError);
  Eigen::MatrixXi one(1, 1);
  one << 2;
  CHECK_THROWS_AS(AnnotationMatrix(one, 2), ContractError);
  Eigen::MatrixXi ok(1, 2);
  ok << 1, 0;
  CHECK_THROWS_AS(AnnotationMatrix(ok, 1), ContractError);
}

TEST_CASE("majority label") {
  const std::vector<std::string> aab = {"A", "A", "B"};
  const std::vector<std::string> abc = {"A", "B", "C"};
  const std::vector<std::string> aaa = {"A", "A", "A"};
  CHECK(*MajorityLabel<std::string>(aab) == "A");
  CHECK_FALSE(MajorityLabel<std::string>(abc).has_value());
  CHECK(*MajorityLabel<std::string>(aaa) == "A");
  const std::vector<int> ab = {0, 1};
  CHECK_FALSE(MajorityLabel<int>(ab).has_value());
}

TEST_CASE("annotation loader") {
  std::filesystem::create_directories(HATEX_TEST_TMP);
  const std::string path = std::string(HATEX_TEST_TMP) + "/ann.csv";
  std::ofstream(path) << "id,annotator,label\n"
                         "s1,a,religious\ns1,b,religious\ns1,c,political\n"
                         "s2,a,political\ns2,b,political\ns2,c,political\n";
  const AnnotationSet set = LoadAnnotations(path);
  CHECK(set.subject_ids == std::vector<std::string>{"s1", "s2"});
  CHECK(set.categories == std::vector<std::string>{"political", "religious"});
  CHECK(set.matrix.counts()(0, 1) == 2);
  CHECK(set.matrix.annotators() == 3);

  const std::string uneven = std::string(HATEX_TEST_TMP) + "/uneven.csv";
  std::ofstream(uneven) << "id,annotator,label\ns1,a,x\ns1,b,y\ns2,a,x\n";
  CHECK_THROWS(LoadAnnotations(uneven));
}
