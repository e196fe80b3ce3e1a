#pragma once

#include "satd_radar/clustering.hpp"
#include "satd_radar/history.hpp"
#include "satd_radar/lifecycle.hpp"
#include "satd_radar/pairs.hpp"
#include "satd_radar/records.hpp"
#include "satd_radar/report.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace satd {

inline constexpr const char *kLexicalModel = "lexical-char-trigram-tfidf";

struct PipelineConfig {
  std::filesystem::path repo_path;
  std::string branch;  // empty: master, falling back to main
  std::string project; // empty: repository directory name
  std::filesystem::path output_dir;
  ClusterConfig cluster;
  MicroCloneConfig micro_clone;
  std::optional<std::filesystem::path> embeddings_path;
  bool no_embeddings = false;
  std::optional<std::filesystem::path> clone_placements_path;
  std::string extension = ".java";
  std::optional<std::filesystem::path> dump_hunks_path;
  AutoGeneratedPatterns auto_generated;

  std::string project_name() const;
  // Throws satd::Error (stage "config").
  void validate() const;
};

// Output file names inside output_dir.
struct BundlePaths {
  std::filesystem::path corpus, groups, pairs, report, report_markdown, warnings;
  explicit BundlePaths(const std::filesystem::path &dir);
};

struct MineResult {
  std::vector<CommitMeta> chain;
  std::vector<FileLineage> lineages;
  std::vector<HunkStream> streams;
  std::vector<SatdComment> corpus;
  std::vector<std::string> warnings;
};

// Mines the repository into the comments corpus. Lineages are processed in
// parallel; the corpus comes back sorted and numbered.
MineResult mine_repository(const PipelineConfig &config);

// Clusters the kept comments, from the embeddings file or the lexical
// fallback.
ClusteringResult cluster_corpus(const PipelineConfig &config,
                                const std::vector<SatdComment> &corpus);

// Pairs, statuses, same-file statistics, micro-clone context (when
// snapshots are available) and clone-class membership (when placements are
// configured).
PairsDocument analyze_groups(const PipelineConfig &config, const std::vector<SatdComment> &corpus,
                             const ClusteringResult &clusters, const SnapshotSource &snapshots);

// Assembles and self-checks the project report.
ProjectReport build_report(const PipelineConfig &config, const std::vector<SatdComment> &corpus,
                           const ClusteringResult &clusters, const PairsDocument &pairs,
                           const std::vector<std::string> &warnings);

// Stage entry points used by the CLI; each reads its inputs from and writes
// its outputs to config.output_dir.
void run_mine_stage(const PipelineConfig &config);
void run_cluster_stage(const PipelineConfig &config);
void run_analyze_stage(const PipelineConfig &config);
ProjectReport run_report_stage(const PipelineConfig &config);

// mine -> cluster -> analyze -> report. Returns 0 once the whole bundle is
// written; otherwise prints "error [stage]: cause" to `err` and returns 1.
int run_pipeline(const PipelineConfig &config, std::ostream &err);

struct ManifestEntry {
  std::string project;
  std::filesystem::path repo_path;
  std::string branch;
};

// Lines of "project repo_path [branch]"; '#' starts a comment. Relative
// paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path &path);

// One bundle per project under output_dir/<project>, plus a combined
// report with cross-project same-file ratio comparisons.
int run_manifest(const PipelineConfig &base, const std::vector<ManifestEntry> &entries,
                 const std::string &focus, std::ostream &err);

} // namespace satd
