#include "satd_radar/pairs.hpp"

#include "satd_radar/error.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace satd {
namespace {

SatdComment comment(SatdId id, std::size_t file_id, std::string created,
                    std::optional<std::string> deleted = std::nullopt, long long deleted_ts = 0) {
  SatdComment c;
  c.satd_id = id;
  c.file_id = file_id;
  c.file_path_at_creation = "src/F" + std::to_string(file_id) + ".java";
  c.created_in_commit = std::move(created);
  c.created_in_line = 10 * id;
  if (deleted) {
    c.deleted_in_commit = deleted;
    c.deleted_timestamp = deleted_ts;
  } else {
    c.current_line = c.created_in_line;
  }
  return c;
}

DuplicateGroup group(std::vector<SatdId> ids) {
  DuplicateGroup g;
  g.group_id = 1;
  g.member_satd_ids = std::move(ids);
  return g;
}

TEST(MakePairs, CountsAndCanonicalOrder) {
  EXPECT_EQ(make_pairs(group({1, 2})).size(), 1u);
  EXPECT_EQ(make_pairs(group({1, 2, 3})).size(), 3u);
  auto four = make_pairs(group({9, 4, 7, 1}));
  ASSERT_EQ(four.size(), 6u);
  for (const auto &p : four)
    EXPECT_LT(p.satd_a, p.satd_b);
  EXPECT_EQ(four.front().satd_a, 1u);
  EXPECT_EQ(four.front().satd_b, 4u);
}

TEST(SameFileRatio, SpecCases) {
  std::vector<SatdComment> corpus{comment(1, 1, "c"), comment(2, 1, "c"), comment(3, 1, "c"),
                                  comment(4, 2, "c"), comment(5, 3, "c")};
  auto idx = index_corpus(corpus);
  EXPECT_DOUBLE_EQ(same_file_ratio(group({1, 2, 3}), idx).same_file_ratio, 1.0);
  auto s = same_file_ratio(group({1, 2, 4}), idx);
  EXPECT_EQ(s.m, 1u);
  EXPECT_EQ(s.pair_count, 3u);
  EXPECT_DOUBLE_EQ(s.same_file_ratio, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(same_file_ratio(group({1, 4, 5}), idx).same_file_ratio, 0.0);
}

TEST(Classify, IntroductionByCommit) {
  std::vector<SatdComment> corpus{comment(1, 1, "C"), comment(2, 2, "C"), comment(3, 1, "D")};
  auto idx = index_corpus(corpus);
  EXPECT_EQ(classify_introduction({1, 1, 2}, idx), IntroStatus::SameCommit);
  EXPECT_EQ(classify_introduction({1, 1, 3}, idx), IntroStatus::DifferentCommits);
}

TEST(Classify, RemovalStatusesAndDeltas) {
  const long long jan1 = 1577836800; // 2020-01-01T00:00Z
  const long long jan9 = 1578528000; // 2020-01-09T00:00Z
  std::vector<SatdComment> corpus{comment(1, 1, "C", "X", jan1), comment(2, 1, "C", "X", jan1),
                                  comment(3, 1, "C", "Y", jan9), comment(4, 1, "C"),
                                  comment(5, 1, "C")};
  auto idx = index_corpus(corpus);

  auto same = classify_removal({1, 1, 2}, idx);
  EXPECT_EQ(same.status, RemovalStatus::Consistent);
  EXPECT_EQ(same.detail, RemovalDetail::RemovedSameCommit);
  EXPECT_EQ(same.delta_days, 0.0);

  auto apart = classify_removal({1, 1, 3}, idx);
  EXPECT_EQ(apart.status, RemovalStatus::DifferentCommits);
  EXPECT_DOUBLE_EQ(*apart.delta_days, 8.0);

  auto one = classify_removal({1, 1, 4}, idx);
  EXPECT_EQ(one.status, RemovalStatus::OneRemovedOneRemains);
  EXPECT_FALSE(one.delta_days);

  auto both = classify_removal({1, 4, 5}, idx);
  EXPECT_EQ(both.status, RemovalStatus::Consistent);
  EXPECT_EQ(both.detail, RemovalDetail::BothRemain);
  EXPECT_FALSE(both.delta_days);
}

TEST(Classify, UnknownIdIsAnAnalyzeError) {
  std::vector<SatdComment> corpus{comment(1, 1, "C")};
  try {
    classify_introduction({1, 1, 2}, index_corpus(corpus));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.stage(), "analyze");
  }
}

TEST(DeltaSummary, MeanAndMedian) {
  EXPECT_FALSE(summarize_deltas({}));
  auto one = *summarize_deltas({1.4});
  EXPECT_DOUBLE_EQ(one.mean, 1.4);
  EXPECT_DOUBLE_EQ(one.median, 1.4);
  auto skewed = *summarize_deltas({22, 1, 2});
  EXPECT_NEAR(skewed.mean, 8.33, 0.005);
  EXPECT_DOUBLE_EQ(skewed.median, 2.0);
  EXPECT_DOUBLE_EQ(summarize_deltas({1, 2, 3, 10})->median, 2.5);
}

TEST(DeltaSummary, OnlyCoIntroducedPairsRemovedApart) {
  CommentPair a{}, b{}, c{};
  a.intro_status = IntroStatus::SameCommit;
  a.removal_status = RemovalStatus::DifferentCommits;
  a.removal_delta_days = 3.0;
  b = a;
  b.intro_status = IntroStatus::DifferentCommits;
  b.removal_delta_days = 100.0;
  c = a;
  c.removal_status = RemovalStatus::Consistent;
  c.removal_delta_days = 0.0;
  auto s = removal_delta_summary({a, b, c});
  ASSERT_TRUE(s);
  EXPECT_EQ(s->count, 1u);
  EXPECT_DOUBLE_EQ(s->mean, 3.0);
}

TEST(MicroClone, NormalizationAbstractsNamesAndLiterals) {
  auto a = normalize_window({"int count = 10; // TODO", "", "  return count;"});
  auto b = normalize_window({"int total = 99;", "/* note */", "return   total;"});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 2u);
}

std::vector<std::string> distinct_code_lines() {
  return {"int a = 1;",   "return a;",      "if (a) {",      "}",          "a++;",
          "while (a) {",  "break;",         "continue;",     "throw a;",   "a = b + c;",
          "for (;;) {",   "do {",           "switch (a) {",  "try {",      "a.b(c);",
          "new A();"};
}

TEST(MicroClone, WindowSimilarityBoundaries) {
  auto pool = distinct_code_lines();
  std::vector<std::string> a(pool.begin(), pool.begin() + 10);
  EXPECT_DOUBLE_EQ(window_similarity(normalize_window(a), normalize_window(a)), 1.0);

  std::vector<std::string> other(pool.begin() + 10, pool.end());
  std::vector<std::string> few(a.begin(), a.begin() + 6);
  EXPECT_DOUBLE_EQ(window_similarity(normalize_window(few), normalize_window(other)), 0.0);

  // Seven of ten normalized lines in common, in order.
  auto b = a;
  b[2] = pool[10];
  b[5] = pool[11];
  b[8] = pool[12];
  auto na = normalize_window(a), nb = normalize_window(b);
  ASSERT_EQ(na.size(), 10u);
  ASSERT_EQ(nb.size(), 10u);
  double s = window_similarity(na, nb);
  EXPECT_DOUBLE_EQ(s, 0.7);
  EXPECT_GE(s, MicroCloneConfig{}.similarity_threshold);
}

TEST(MicroClone, ContextWindowClipsAtFileEdges) {
  std::string content = "l1\nl2\nl3\nl4\nl5";
  EXPECT_EQ(context_window(content, 1, 2), (std::vector<std::string>{"l1", "l2", "l3"}));
  EXPECT_EQ(context_window(content, 5, 1), (std::vector<std::string>{"l4", "l5"}));
}

TEST(MicroClone, UsesCreationSnapshots) {
  std::vector<SatdComment> corpus{comment(1, 1, "C"), comment(2, 2, "C")};
  corpus[0].created_in_line = 2;
  corpus[1].created_in_line = 2;
  auto idx = index_corpus(corpus);
  CommentPair p{1, 1, 2};
  SnapshotSource same = [](const std::string &, const std::string &) {
    return std::optional<std::string>("int a = 1;\n// TODO x\nreturn a;\n");
  };
  auto r = micro_clone_context(p, idx, same, MicroCloneConfig{});
  EXPECT_EQ(r.status, MicroCloneStatus::Clone);
  EXPECT_DOUBLE_EQ(*r.similarity, 1.0);

  SnapshotSource missing = [](const std::string &, const std::string &path) {
    return path == "src/F1.java" ? std::optional<std::string>("x;\n") : std::nullopt;
  };
  r = micro_clone_context(p, idx, missing, MicroCloneConfig{});
  EXPECT_EQ(r.status, MicroCloneStatus::Unevaluable);
  EXPECT_FALSE(r.similarity);
}

TEST(MicroClone, ConfigValidation) {
  EXPECT_THROW((MicroCloneConfig{0, 0.7}).validate(), std::invalid_argument);
  EXPECT_THROW((MicroCloneConfig{5, 1.5}).validate(), std::invalid_argument);
  EXPECT_NO_THROW(MicroCloneConfig{}.validate());
}

TEST(ClonePlacements, ParsesWithOptionalHeader) {
  std::istringstream with_header("file_path,start_line,end_line,clone_class_id\n"
                                 "./src/F1.java,5,20,5\n\nsrc/F2.java, 1 , 30 ,\"5\"\r\n");
  auto p = parse_clone_placements(with_header);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (ClonePlacement{"src/F1.java", 5, 20, "5"}));
  EXPECT_EQ(p[1], (ClonePlacement{"src/F2.java", 1, 30, "5"}));
  std::istringstream bare("a.java,1,2,x\n");
  EXPECT_EQ(parse_clone_placements(bare).size(), 1u);
}

TEST(ClonePlacements, MalformedRowNamesTheRow) {
  std::istringstream bad("a.java,1,2,x\nb.java,one,2,y\n");
  try {
    parse_clone_placements(bad);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.stage(), "analyze");
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
  std::istringstream reversed("a.java,9,2,x\n");
  EXPECT_THROW(parse_clone_placements(reversed), Error);
  EXPECT_THROW(ingest_clone_placements("/nonexistent/placements.csv"), Error);
}

TEST(GroupInClone, NeedsOneSharedClass) {
  std::vector<SatdComment> corpus{comment(1, 1, "C"), comment(2, 2, "C")};
  auto idx = index_corpus(corpus); // lines 10 and 20
  std::vector<ClonePlacement> same{{"src/F1.java", 5, 15, "5"}, {"src/F2.java", 15, 25, "5"}};
  EXPECT_TRUE(group_in_clone(group({1, 2}), idx, same));
  std::vector<ClonePlacement> outside{{"src/F1.java", 5, 15, "5"}, {"src/F2.java", 21, 25, "5"}};
  EXPECT_FALSE(group_in_clone(group({1, 2}), idx, outside));
  std::vector<ClonePlacement> split{{"src/F1.java", 5, 15, "5"}, {"src/F2.java", 15, 25, "6"}};
  EXPECT_FALSE(group_in_clone(group({1, 2}), idx, split));
}

TEST(StatusNames, RoundTrip) {
  for (auto s : {IntroStatus::SameCommit, IntroStatus::DifferentCommits})
    EXPECT_EQ(intro_status_from_string(to_string(s)), s);
  for (auto s : {RemovalStatus::Consistent, RemovalStatus::DifferentCommits,
                 RemovalStatus::OneRemovedOneRemains})
    EXPECT_EQ(removal_status_from_string(to_string(s)), s);
  for (auto s : {MicroCloneStatus::NotEvaluated, MicroCloneStatus::Clone,
                 MicroCloneStatus::NotClone, MicroCloneStatus::Unevaluable})
    EXPECT_EQ(micro_clone_status_from_string(to_string(s)), s);
  EXPECT_THROW(removal_status_from_string("sometimes"), std::invalid_argument);
}

} // namespace
} // namespace satd
