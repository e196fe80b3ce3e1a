#include "satd_radar/history.hpp"

#include "fixture_repo.hpp"
#include "satd_radar/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

namespace satd {
namespace {

using testing::GitFixture;
using testing::kFixtureEpoch;
using testing::TempDir;

void git(const std::filesystem::path &dir, std::vector<std::string> args) {
  args.insert(args.begin(), "git");
  auto r = run_process(args, dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
}

std::string error_stage(const std::function<void()> &f, std::string *message = nullptr) {
  try {
    f();
  } catch (const Error &e) {
    if (message)
      *message = e.what();
    return e.stage();
  }
  return "";
}

TEST(MainChain, LinearHistoryInOrder) {
  TempDir tmp("satd-chain");
  GitFixture g(tmp.path());
  std::vector<std::string> ids;
  for (int i = 0; i < 3; ++i) {
    g.write("A.java", "class A {} // " + std::to_string(i) + "\n");
    ids.push_back(g.commit("c" + std::to_string(i), kFixtureEpoch + i));
  }
  GitRepository repo(tmp.path());
  auto chain = extract_main_chain(repo);
  ASSERT_EQ(chain.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(chain[i].id, ids[i]);
    EXPECT_EQ(chain[i].order_index, i);
    EXPECT_EQ(chain[i].author_timestamp, kFixtureEpoch + static_cast<long long>(i));
  }
  EXPECT_TRUE(chain[0].parent_ids.empty());
  EXPECT_EQ(chain[2].parent_ids, std::vector<std::string>{ids[1]});
}

TEST(MainChain, MergedSideBranchCommitsAreAbsent) {
  TempDir tmp("satd-merge");
  GitFixture g(tmp.path());
  g.write("A.java", "class A {}\n");
  g.commit("base", kFixtureEpoch);
  git(tmp.path(), {"checkout", "-q", "-b", "side"});
  g.write("B.java", "class B {}\n");
  auto side = g.commit("side work", kFixtureEpoch + 10);
  git(tmp.path(), {"checkout", "-q", "master"});
  g.write("A.java", "class A { int x; }\n");
  g.commit("main work", kFixtureEpoch + 20);
  git(tmp.path(), {"merge", "-q", "--no-ff", "-m", "merge", "side"});

  GitRepository repo(tmp.path());
  auto chain = extract_main_chain(repo);
  auto reference = run_process({"git", "rev-list", "--first-parent", "--reverse", "master"}, tmp.path());
  std::vector<std::string> expected;
  std::istringstream lines(reference.out);
  for (std::string line; std::getline(lines, line);)
    expected.push_back(line);
  std::vector<std::string> actual;
  for (const auto &c : chain) {
    actual.push_back(c.id);
    EXPECT_NE(c.id, side);
  }
  EXPECT_EQ(actual, expected);
  EXPECT_EQ(chain.back().parent_ids.size(), 2u);

  // The merge brings B.java onto the chain in the merge commit.
  auto lineages = build_file_lineages(repo, chain);
  auto b = std::find_if(lineages.begin(), lineages.end(),
                        [](const FileLineage &l) { return l.final_path == "B.java"; });
  ASSERT_NE(b, lineages.end());
  EXPECT_EQ(b->segments.front().first_commit_index, chain.size() - 1);
}

TEST(MainChain, BranchResolution) {
  TempDir tmp("satd-branch");
  run_process({"git", "init", "-q", "-b", "main", tmp.path().string()});
  git(tmp.path(), {"-c", "user.name=x", "-c", "user.email=x@y", "commit", "-q", "--allow-empty", "-m", "m"});
  GitRepository repo(tmp.path());
  EXPECT_EQ(extract_main_chain(repo).size(), 1u);
  std::string message;
  EXPECT_EQ(error_stage([&] { extract_main_chain(repo, "nonexistent"); }, &message), "mine");
  EXPECT_NE(message.find("unresolvable branch"), std::string::npos);
}

TEST(GitRepository, RejectsMissingAndNonRepositoryPaths) {
  std::string message;
  EXPECT_EQ(error_stage([] { GitRepository("/nonexistent/satd-repo"); }, &message), "mine");
  EXPECT_NE(message.find("not found"), std::string::npos);
  TempDir tmp("satd-plain");
  EXPECT_EQ(error_stage([&] { GitRepository r(tmp.path()); }, &message), "mine");
  EXPECT_NE(message.find("not a git repository"), std::string::npos);
}

TEST(Lineages, RenameSplitsIntoSegments) {
  TempDir tmp("satd-rename");
  GitFixture g(tmp.path());
  g.write("a.java", "class A {\n  int x;\n}\n");
  g.commit("c0", kFixtureEpoch);
  g.write("other.java", "class O {}\n");
  g.commit("c1", kFixtureEpoch + 1);
  g.write("a.java", "class A {\n  int x;\n  int y;\n}\n");
  g.commit("c2", kFixtureEpoch + 2);
  g.move("a.java", "b.java");
  g.commit("c3", kFixtureEpoch + 3);

  GitRepository repo(tmp.path());
  auto chain = extract_main_chain(repo);
  auto lineages = build_file_lineages(repo, chain);
  ASSERT_EQ(lineages.size(), 2u);
  const auto &a = lineages[0];
  EXPECT_EQ(a.file_id, 1u);
  EXPECT_EQ(a.final_path, "b.java");
  ASSERT_EQ(a.segments.size(), 2u);
  EXPECT_EQ(a.segments[0], (LineageSegment{"a.java", 0, 2}));
  EXPECT_EQ(a.segments[1], (LineageSegment{"b.java", 3, 3}));
  EXPECT_EQ(a.path_at(1), "a.java");
  EXPECT_EQ(a.path_at(3), "b.java");
  EXPECT_FALSE(a.terminated());
  EXPECT_EQ(lineages[1].segments.size(), 1u);
  EXPECT_EQ(lineages[1].final_path, "other.java");
}

TEST(Lineages, SwappedNamesFollowContent) {
  TempDir tmp("satd-swap");
  GitFixture g(tmp.path());
  const std::string x = "class X {\n  // first file\n}\n";
  const std::string y = "class Y {\n  // second file\n}\n";
  g.write("x.java", x);
  g.write("y.java", y);
  g.commit("c0", kFixtureEpoch);
  g.write("x.java", y);
  g.write("y.java", x);
  g.commit("swap", kFixtureEpoch + 1);

  GitRepository repo(tmp.path());
  auto chain = extract_main_chain(repo);
  auto lineages = build_file_lineages(repo, chain);
  ASSERT_EQ(lineages.size(), 2u);
  for (const auto &l : lineages) {
    ASSERT_EQ(l.segments.size(), 2u);
    auto stream = ordered_hunks(repo, l, chain);
    EXPECT_TRUE(stream.hunks.size() <= 1u) << "content should not change across the swap";
    EXPECT_NE(l.segments[0].path, l.segments[1].path);
  }
}

TEST(Lineages, DeletionTerminatesWithoutHunk) {
  TempDir tmp("satd-delete");
  GitFixture g(tmp.path());
  g.write("gone.java", "// TODO remove\nclass G {}\n");
  g.write("stay.java", "class S {}\n");
  g.commit("c0", kFixtureEpoch);
  g.remove("gone.java");
  g.commit("c1", kFixtureEpoch + 1);

  GitRepository repo(tmp.path());
  auto chain = extract_main_chain(repo);
  auto lineages = build_file_lineages(repo, chain);
  auto gone = std::find_if(lineages.begin(), lineages.end(),
                           [](const FileLineage &l) { return l.final_path == "gone.java"; });
  ASSERT_NE(gone, lineages.end());
  EXPECT_EQ(gone->terminated_at, 1u);
  auto stream = ordered_hunks(repo, *gone, chain);
  ASSERT_EQ(stream.hunks.size(), 1u);
  EXPECT_EQ(replay(stream.hunks), "// TODO remove\nclass G {}\n");

  auto records = scan_for_satd(*gone, stream.hunks, chain);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].deleted_in_commit, chain[1].id);
}

TEST(OrderedHunks, BinaryContentIsSkippedWithWarning) {
  TempDir tmp("satd-binary");
  GitFixture g(tmp.path());
  g.write("Blob.java", std::string("class B {}\0\1\2", 13));
  g.commit("c0", kFixtureEpoch);
  GitRepository repo(tmp.path());
  auto chain = extract_main_chain(repo);
  auto lineages = build_file_lineages(repo, chain);
  ASSERT_EQ(lineages.size(), 1u);
  auto stream = ordered_hunks(repo, lineages[0], chain);
  ASSERT_TRUE(stream.warning);
  EXPECT_NE(stream.warning->find("binary"), std::string::npos);
  EXPECT_TRUE(stream.hunks.empty());
}

TEST(DiffVersions, InsertionHunk) {
  CommitMeta c{"abc", {}, 0, 4};
  auto hunks = diff_versions(split_lines("a\nb"), split_lines("a\nc\nb"), c, 7);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].new_start, 2u);
  EXPECT_EQ(hunks[0].old_len, 0u);
  EXPECT_EQ(hunks[0].added_lines, Lines{"c"});
  EXPECT_EQ(hunks[0].commit_id, "abc");
  EXPECT_EQ(hunks[0].commit_index, 4u);
  EXPECT_EQ(hunks[0].file_id, 7u);
  EXPECT_TRUE(diff_versions(split_lines("a\nb"), split_lines("a\nb"), c, 7).empty());
}

TEST(Replay, FixtureHeadsAreByteExact) {
  TempDir tmp("satd-replay");
  auto plan = testing::build_planned_fixture(tmp.path());
  GitRepository repo(plan.repo);
  auto chain = extract_main_chain(repo);
  for (const auto &l : build_file_lineages(repo, chain)) {
    auto stream = ordered_hunks(repo, l, chain);
    auto head = repo.read_file_at(chain.back().id, l.final_path);
    ASSERT_TRUE(head);
    EXPECT_EQ(replay(stream.hunks), *head) << l.final_path;
    for (std::size_t i = 1; i < stream.hunks.size(); ++i)
      EXPECT_LE(stream.hunks[i - 1].commit_index, stream.hunks[i].commit_index);
  }
}

TEST(LineSetSimilarity, JaccardOnTrimmedLines) {
  EXPECT_DOUBLE_EQ(line_set_similarity("a\n b\n\n", "b\na\n"), 1.0);
  EXPECT_DOUBLE_EQ(line_set_similarity("a\nb\n", "b\nc\n"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(line_set_similarity("a\n", "z\n"), 0.0);
}

} // namespace
} // namespace satd
