#pragma once

#include "satd_radar/clustering.hpp"
#include "satd_radar/lifecycle.hpp"
#include "satd_radar/mann_whitney.hpp"
#include "satd_radar/pairs.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace satd {

struct CorpusStats {
  std::size_t total_satd = 0;
  std::size_t removed_filter1 = 0; // auto-generated
  std::size_t removed_filter2 = 0; // single word / numbers only
  std::size_t after_filtering = 0;
  std::size_t duplicate_satd_count = 0;
  std::size_t group_count = 0;
  std::optional<double> duplicate_ratio;                 // over total_satd
  std::optional<double> duplicate_ratio_after_filtering; // over after_filtering

  bool operator==(const CorpusStats &) const = default;
};

CorpusStats emit_corpus_stats(const std::vector<SatdComment> &corpus,
                              const std::vector<DuplicateGroup> &groups);

// Intro status rows (same_commit, different_commits) by removal status
// columns (consistent, different_commits, one_removed_one_remains).
struct PairCounts {
  std::array<std::array<std::size_t, 3>, 2> cells{};
  // Same rows, consistent split into removed_same_commit / both_remain.
  std::array<std::array<std::size_t, 4>, 2> detail{};
  std::array<std::size_t, 2> intro_totals{};
  std::size_t total = 0;

  void add(const CommentPair &pair);
  bool operator==(const PairCounts &) const = default;
};

struct PairDistribution {
  PairCounts overall;
  std::map<std::string, PairCounts> by_project;

  bool operator==(const PairDistribution &) const = default;
};

// The project of a pair is the project of its first comment.
PairDistribution emit_pair_distribution(const std::vector<CommentPair> &pairs,
                                        const CorpusIndex &corpus);

struct MicroCloneSummary {
  std::size_t pairs_evaluated = 0;
  std::size_t clone = 0;
  std::size_t not_clone = 0;
  std::size_t unevaluable = 0;
  // Groups whose every pair was evaluable and judged a micro-clone.
  std::size_t groups_all_clone = 0;

  bool operator==(const MicroCloneSummary &) const = default;
};

struct CloneSummary {
  std::size_t group_count = 0;
  std::size_t groups_in_clone = 0;
  std::vector<std::uint64_t> group_ids_in_clone;

  bool operator==(const CloneSummary &) const = default;
};

struct ProjectReport {
  std::string project;
  std::string embedding_model;
  ClusterConfig cluster;
  MicroCloneConfig micro_clone_config;
  CorpusStats corpus;
  std::vector<GroupFileStats> group_stats;
  PairDistribution pairs;
  std::optional<DeltaSummary> removal_delta;
  std::optional<MicroCloneSummary> micro_clone; // heuristic
  std::optional<CloneSummary> block_clones;
  std::vector<std::string> warnings;

  bool operator==(const ProjectReport &) const = default;
};

struct CrossProjectComparison {
  std::string project_a;
  std::string project_b;
  std::size_t groups_a = 0;
  std::size_t groups_b = 0;
  double u_a = 0.0;
  double u_b = 0.0;
  double p_value = 1.0;
  bool exact = false;

  bool operator==(const CrossProjectComparison &) const = default;
};

struct MultiProjectReport {
  std::vector<ProjectReport> projects;
  PairDistribution combined;
  std::vector<CrossProjectComparison> comparisons;

  bool operator==(const MultiProjectReport &) const = default;
};

// Mann-Whitney over same-file ratios. With a focus project only focus vs
// each other project is compared; otherwise every unordered pair.
std::vector<CrossProjectComparison> compare_same_file_ratios(
    const std::vector<ProjectReport> &projects, const std::string &focus = {});

// Filter counts: after_filtering = total - filter1 - filter2.
bool filter_counts_consistent(std::size_t total, std::size_t filter1, std::size_t filter2,
                       std::size_t after_filtering);
// Pair matrix row: removal-status cells sum to the intro-status total.
bool pair_row_consistent(std::size_t intro_total, std::size_t consistent,
                           std::size_t different_commits, std::size_t one_removed);

// Every arithmetic identity of the report; throws satd::Error (stage
// "report") naming the first violated one.
void self_check(const ProjectReport &report);
void self_check(const MultiProjectReport &report);

// Human-readable rendering of the corpus counts and pair matrix.
std::string render_markdown(const ProjectReport &report);
std::string render_markdown(const MultiProjectReport &report);

} // namespace satd
