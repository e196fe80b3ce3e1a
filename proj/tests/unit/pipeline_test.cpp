#include "satd_radar/pipeline.hpp"

#include "fixture_repo.hpp"
#include "satd_radar/git_repository.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace satd {
namespace {

using testing::GitFixture;
using testing::kFixtureEpoch;
using testing::TempDir;
namespace fs = std::filesystem;

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ProcessResult cli(std::vector<std::string> args, std::vector<std::string> env = {}) {
  std::vector<std::string> argv{"env"};
  argv.insert(argv.end(), env.begin(), env.end());
  argv.push_back(SATD_RADAR_CLI);
  argv.insert(argv.end(), args.begin(), args.end());
  return run_process(argv);
}

class FixturePipeline : public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    tmp_ = new TempDir("satd-cli");
    plan_ = new testing::PlannedFixture(testing::build_planned_fixture(tmp_->path() / "repo"));
  }
  static void TearDownTestSuite() {
    delete plan_;
    delete tmp_;
  }
  static fs::path out(const std::string &name) { return tmp_->path() / name; }
  static std::string repo() { return plan_->repo.string(); }

  static TempDir *tmp_;
  static testing::PlannedFixture *plan_;
};

TempDir *FixturePipeline::tmp_ = nullptr;
testing::PlannedFixture *FixturePipeline::plan_ = nullptr;

const char *kBundle[] = {"comments.jsonl", "groups.json", "pairs.json", "report.json", "report.md",
                         "warnings.txt"};

TEST_F(FixturePipeline, AllWritesTheBundle) {
  auto r = cli({"all", "--repo", repo(), "--out", out("all").string(), "--no-embeddings"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const char *f : kBundle)
    EXPECT_TRUE(fs::exists(out("all") / f)) << f;
  auto report = read_report(out("all") / "report.json");
  EXPECT_EQ(report.project, "repo");
  EXPECT_EQ(report.corpus.total_satd, 10u);
  EXPECT_EQ(report.corpus.removed_filter1, 1u);
  EXPECT_EQ(report.corpus.removed_filter2, 1u);
  EXPECT_EQ(report.corpus.after_filtering, 8u);
  EXPECT_EQ(report.corpus.group_count, 2u);
  EXPECT_EQ(report.corpus.duplicate_satd_count, 5u);
  EXPECT_EQ(report.pairs.overall.total, 4u);
  EXPECT_EQ(report.pairs.overall.intro_totals[0], 2u);
  ASSERT_TRUE(report.removal_delta);
  EXPECT_DOUBLE_EQ(report.removal_delta->mean, 8.0);
  ASSERT_TRUE(report.micro_clone);
  EXPECT_EQ(report.micro_clone->pairs_evaluated, 4u);
  EXPECT_FALSE(report.block_clones);
  EXPECT_NE(slurp(out("all") / "report.md").find("| repo | 10 | 1 | 1 | 8 | 5 | 2 |"),
            std::string::npos);
}

TEST_F(FixturePipeline, StagesMatchAllAndRerunsAreIdentical) {
  ASSERT_EQ(cli({"all", "--repo", repo(), "--out", out("a1").string()}).exit_code, 0);
  ASSERT_EQ(cli({"all", "--repo", repo(), "--out", out("a2").string(), "--seed", "99"},
                {"SATD_RADAR_THREADS=3"})
                .exit_code,
            0);
  auto dir = out("staged").string();
  ASSERT_EQ(cli({"mine", "--repo", repo(), "--out", dir}).exit_code, 0);
  ASSERT_EQ(cli({"cluster", "--out", dir, "--project", "repo"}).exit_code, 0);
  ASSERT_EQ(cli({"analyze", "--out", dir, "--repo", repo()}).exit_code, 0);
  ASSERT_EQ(cli({"report", "--out", dir, "--project", "repo"}).exit_code, 0);
  for (const char *f : kBundle) {
    EXPECT_EQ(slurp(out("a1") / f), slurp(out("a2") / f)) << f;
    EXPECT_EQ(slurp(out("a1") / f), slurp(out("staged") / f)) << f;
  }
}

TEST_F(FixturePipeline, ExternalEmbeddingsDriveClustering) {
  auto dir = out("emb");
  ASSERT_EQ(cli({"mine", "--repo", repo(), "--out", dir.string()}).exit_code, 0);
  auto corpus = read_corpus(dir / "comments.jsonl");
  std::map<std::string, std::size_t> axis;
  for (const auto &c : corpus)
    if (c.filter == FilterOutcome::Kept)
      axis.emplace(c.clean_text, axis.size());
  std::map<SatdId, DenseVector> vectors;
  for (const auto &c : corpus)
    if (c.filter == FilterOutcome::Kept) {
      DenseVector v(axis.size(), 0.0);
      v[axis[c.clean_text]] = 3.0; // renormalized on load
      vectors[c.satd_id] = v;
    }
  write_embeddings(dir / "embeddings.jsonl", "one-hot-test", vectors);
  auto r = cli({"cluster", "--out", dir.string(), "--embeddings", (dir / "embeddings.jsonl").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto groups = read_groups(dir / "groups.json");
  EXPECT_EQ(groups.embedding_model, "one-hot-test");
  EXPECT_EQ(groups.groups.size(), 2u);

  vectors.erase(vectors.begin());
  write_embeddings(dir / "embeddings.jsonl", "one-hot-test", vectors);
  r = cli({"cluster", "--out", dir.string(), "--embeddings", (dir / "embeddings.jsonl").string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("error [cluster]: missing embedding"), std::string::npos) << r.err;
}

TEST_F(FixturePipeline, ClonePlacementsMarkGroups) {
  auto csv = out("clones.csv");
  {
    std::ofstream f(csv);
    f << "file_path,start_line,end_line,clone_class_id\n"
         "src/Parser.java,3,12,7\nsrc/Builder.java,1,8,7\n"
         "src/Lexer.java,1,15,8\nsrc/Render.java,1,8,9\n";
  }
  auto r = cli({"all", "--repo", repo(), "--out", out("clones").string(), "--clone-placements",
                csv.string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto report = read_report(out("clones") / "report.json");
  ASSERT_TRUE(report.block_clones);
  EXPECT_EQ(report.block_clones->group_count, 2u);
  EXPECT_EQ(report.block_clones->groups_in_clone, 1u);

  {
    std::ofstream f(csv);
    f << "src/Parser.java,3,x,7\n";
  }
  r = cli({"all", "--repo", repo(), "--out", out("clones").string(), "--clone-placements",
           csv.string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("error [analyze]: malformed clone placement at row 1"), std::string::npos)
      << r.err;
}

TEST_F(FixturePipeline, DumpHunksWritesEveryLineage) {
  auto dump = out("hunks.jsonl");
  ASSERT_EQ(cli({"mine", "--repo", repo(), "--out", out("dump").string(), "--dump-hunks",
                 dump.string()})
                .exit_code,
            0);
  auto text = slurp(dump);
  EXPECT_NE(text.find("\"final_path\":\"src/lex/Tokenizer.java\""), std::string::npos);
  EXPECT_NE(text.find("\"record\":\"hunk\""), std::string::npos);
}

TEST_F(FixturePipeline, ManifestComparesProjects) {
  GitFixture other(out("other"));
  other.write("Q.java", "class Q {\n  // TODO handle escaped quotes properly\n  // TODO handle "
                        "escaped quotes properly\n}\n");
  other.commit("q", kFixtureEpoch);
  auto manifest = out("projects.txt");
  {
    std::ofstream f(manifest);
    f << "# name repo [branch]\nwiki " << repo() << "\nother other master\n";
  }
  auto r = cli({"all", "--manifest", manifest.string(), "--out", out("multi").string(), "--focus",
                "other"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto multi = read_multi_report(out("multi") / "report.json");
  ASSERT_EQ(multi.projects.size(), 2u);
  EXPECT_TRUE(fs::exists(out("multi") / "wiki" / "report.json"));
  EXPECT_EQ(multi.combined.overall.total, 5u);
  ASSERT_EQ(multi.comparisons.size(), 1u);
  EXPECT_EQ(multi.comparisons[0].project_a, "other");
  EXPECT_EQ(multi.comparisons[0].groups_a, 1u);
  EXPECT_EQ(multi.comparisons[0].groups_b, 2u);
}

TEST(Cli, NonexistentRepositoryFailsInMine) {
  TempDir tmp("satd-cli-missing");
  auto r = cli({"all", "--repo", "/nonexistent/satd-repo", "--out", (tmp.path() / "o").string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("error [mine]:"), std::string::npos) << r.err;
}

TEST(Cli, InvalidParametersFailInConfig) {
  TempDir tmp("satd-cli-config");
  auto r = cli({"all", "--repo", tmp.path().string(), "--out", (tmp.path() / "o").string(),
                "--eps", "1.5"});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("error [config]:"), std::string::npos) << r.err;
  r = cli({"all", "--out", (tmp.path() / "o").string()});
  EXPECT_NE(r.exit_code, 0);
}

TEST(Cli, RepositoryWithoutSatdGivesEmptyBundle) {
  TempDir tmp("satd-cli-empty");
  GitFixture g(tmp.path() / "repo");
  g.write("A.java", "class A {\n  // plain comment\n}\n");
  g.commit("a", kFixtureEpoch);
  auto out = tmp.path() / "o";
  auto r = cli({"all", "--repo", (tmp.path() / "repo").string(), "--out", out.string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto report = read_report(out / "report.json");
  EXPECT_EQ(report.corpus, CorpusStats{});
  EXPECT_EQ(report.pairs.overall.total, 0u);
  EXPECT_TRUE(report.group_stats.empty());
  EXPECT_EQ(slurp(out / "comments.jsonl"), "");
}

} // namespace
} // namespace satd
