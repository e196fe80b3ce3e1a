#include "satd_radar/clustering.hpp"

#include "fixture_repo.hpp"
#include "satd_radar/error.hpp"
#include "satd_radar/records.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

namespace satd {
namespace {

using testing::TempDir;

SimilarityMatrix matrix_of(std::vector<SatdId> ids, std::vector<double> values) {
  SimilarityMatrix m;
  m.comment_ids = std::move(ids);
  m.values = std::move(values);
  return m;
}

std::string error_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.stage() + ": " + e.what();
  }
  return "";
}

TEST(Cosine, HandComputedValues) {
  EXPECT_DOUBLE_EQ(dot(DenseVector{1, 0}, DenseVector{0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(dot(DenseVector{0.6, 0.8}, DenseVector{0.6, 0.8}), 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(dot(DenseVector{r, r}, DenseVector{1, 0}), 0.7071, 1e-4);
}

TEST(LexicalFallback, IdenticalTextsAreSimilarityOne) {
  auto m = similarity_matrix(lexical_fallback_embed({{1, "fix this hack"}, {2, "fix this hack"}}));
  EXPECT_NEAR(m.at(0, 1), 1.0, 1e-9);
}

TEST(LexicalFallback, DisjointTrigramsAreSimilarityZero) {
  auto m = similarity_matrix(lexical_fallback_embed({{1, "aaaa"}, {2, "bbbb"}}));
  EXPECT_DOUBLE_EQ(m.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.at(0, 0), 1.0);
}

TEST(LexicalFallback, MatchesHandComputedTfIdf) {
  // Eleven trigrams each, seven shared. Shared grams have idf 1, the four
  // unique ones on each side ln(3/2) + 1; every count is 1.
  auto m = similarity_matrix(lexical_fallback_embed({{1, "fix this hack"}, {2, "fix that hack"}}));
  const double w = 1.0 + std::log(1.5);
  EXPECT_NEAR(m.at(0, 1), 7.0 / (7.0 + 4.0 * w * w), 1e-12);
  EXPECT_GT(m.at(0, 1), 0.0);
  EXPECT_LT(m.at(0, 1), 1.0);
}

TEST(LexicalFallback, CaseInsensitive) {
  auto m = similarity_matrix(lexical_fallback_embed({{1, "Fix This"}, {2, "fix this"}}));
  EXPECT_NEAR(m.at(0, 1), 1.0, 1e-12);
}

TEST(SimilarityMatrix, SymmetricWithUnitDiagonal) {
  auto m = similarity_matrix(lexical_fallback_embed(
      {{4, "remove the hack"}, {9, "remove this hack later"}, {2, "unrelated words"}}));
  ASSERT_EQ(m.comment_ids, (std::vector<SatdId>{2, 4, 9}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(m.at(i, i), 1.0);
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_EQ(m.at(i, j), m.at(j, i));
  }
}

TEST(LoadEmbeddings, ReadsAndRenormalizes) {
  TempDir tmp("satd-emb");
  auto path = tmp.path() / "e.jsonl";
  write_embeddings(path, "unit-test", {{1, {1, 0}}, {2, {0, 2}}, {3, {0.6, 0.8}}});
  std::string model;
  auto v = load_embeddings(path, {1, 2, 3}, &model);
  EXPECT_EQ(model, "unit-test");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[2][1], 1.0);
  EXPECT_DOUBLE_EQ(dot(v[3], v[3]), 1.0);
}

TEST(LoadEmbeddings, ErrorsNameTheProblem) {
  TempDir tmp("satd-emb");
  auto path = tmp.path() / "e.jsonl";
  write_embeddings(path, "m", {{1, {1, 0}}, {2, {0, 1}}});
  auto missing = error_of([&] { load_embeddings(path, {1, 2, 7}); });
  EXPECT_NE(missing.find("cluster"), std::string::npos);
  EXPECT_NE(missing.find("7"), std::string::npos);

  write_embeddings(path, "m", {{1, {1, 0}}, {2, {0, 1, 0}}});
  EXPECT_NE(error_of([&] { load_embeddings(path, {1, 2}); }).find("dimension"), std::string::npos);
  write_embeddings(path, "m", {{1, {1, 0}}, {2, {0, 0}}});
  EXPECT_NE(error_of([&] { load_embeddings(path, {1, 2}); }).find("zero"), std::string::npos);
  {
    std::ofstream out(path);
    out << "{\"satd_id\": 1, \"vector\": [1, 0]}\nnot json\n";
  }
  EXPECT_NE(error_of([&] { load_embeddings(path, {1}); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([&] { load_embeddings(tmp.path() / "absent", {1}); }).find("cannot open"),
            std::string::npos);
}

TEST(Prefilter, ThresholdIsInclusive) {
  auto m = matrix_of({1, 2, 3}, {1, 0.8, 0.1, 0.8, 1, 0.79, 0.1, 0.79, 1});
  EXPECT_EQ(prefilter(m, 0.8), (std::vector<SatdId>{1, 2}));
  auto low = matrix_of({1, 2}, {1, 0.79, 0.79, 1});
  EXPECT_TRUE(prefilter(low, 0.8).empty());
  ClusterConfig config;
  auto result = dbscan(low, prefilter(low, 0.8), config);
  EXPECT_TRUE(result.groups.empty());
}

TEST(Dbscan, ChainsThroughCorePoints) {
  // d(a,b)=0.3, d(b,c)=0.35, d(a,c)=0.7
  std::vector<double> d{0, 0.3, 0.7, 0.3, 0, 0.35, 0.7, 0.35, 0};
  auto labels = dbscan_labels(d, 3, 0.4, 2);
  EXPECT_GE(labels[0], 0);
  EXPECT_EQ(labels[0], labels[1]);
  EXPECT_EQ(labels[1], labels[2]);
}

TEST(Dbscan, IsolatedPointIsNoiseAndTightPairsSplit) {
  std::vector<double> d{0,   0.1, 0.9, 0.9, 0.9, //
                        0.1, 0,   0.9, 0.9, 0.9, //
                        0.9, 0.9, 0,   0.2, 0.9, //
                        0.9, 0.9, 0.2, 0,   0.9, //
                        0.9, 0.9, 0.9, 0.9, 0};
  auto labels = dbscan_labels(d, 5, 0.4, 2);
  EXPECT_EQ(labels[0], labels[1]);
  EXPECT_EQ(labels[2], labels[3]);
  EXPECT_NE(labels[0], labels[2]);
  EXPECT_EQ(labels[4], -1);
}

TEST(Dbscan, BorderPointJoinsFirstCluster) {
  // Tight triples {0,1,2} and {4,5,6}; point 3 sits 0.3 from 2 and from 4.
  // With min_samples 4, 2 and 4 are cores but 3 is not, so 3 is a border
  // point reachable from both clusters and goes to the first one.
  const std::size_t n = 7;
  std::vector<double> d(n * n, 0.9);
  auto set = [&](std::size_t i, std::size_t j, double v) { d[i * n + j] = d[j * n + i] = v; };
  for (std::size_t i = 0; i < n; ++i)
    set(i, i, 0.0);
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}, {4, 5}, {4, 6}, {5, 6}})
    set(i, j, 0.1);
  set(2, 3, 0.3);
  set(3, 4, 0.3);
  auto labels = dbscan_labels(d, n, 0.35, 4);
  EXPECT_EQ(labels[0], labels[2]);
  EXPECT_EQ(labels[3], labels[2]);
  EXPECT_EQ(labels[4], labels[6]);
  EXPECT_NE(labels[3], labels[4]);
}

TEST(Dbscan, GroupIdsFollowSmallestMember) {
  auto m = matrix_of({10, 20, 30, 40}, {1, 0.1, 0.95, 0.1, 0.1, 1, 0.1, 0.9, 0.95, 0.1, 1, 0.1,
                                        0.1, 0.9, 0.1, 1});
  auto r = dbscan(m, prefilter(m, 0.8), ClusterConfig{});
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_EQ(r.groups[0].group_id, 1u);
  EXPECT_EQ(r.groups[0].member_satd_ids, (std::vector<SatdId>{10, 30}));
  EXPECT_EQ(r.groups[1].member_satd_ids, (std::vector<SatdId>{20, 40}));
}

TEST(ClusterConfig, RejectsNonsense) {
  EXPECT_THROW((ClusterConfig{1.5, 0.4, 2}).validate(), std::invalid_argument);
  EXPECT_THROW((ClusterConfig{0.8, 0.0, 2}).validate(), std::invalid_argument);
  EXPECT_THROW((ClusterConfig{0.8, 0.4, 1}).validate(), std::invalid_argument);
  EXPECT_NO_THROW(ClusterConfig{}.validate());
}

} // namespace
} // namespace satd
