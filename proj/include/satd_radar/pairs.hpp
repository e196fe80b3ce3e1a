#pragma once

#include "satd_radar/clustering.hpp"
#include "satd_radar/lifecycle.hpp"

#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace satd {

using CorpusIndex = std::map<SatdId, const SatdComment *>;

CorpusIndex index_corpus(const std::vector<SatdComment> &corpus);

enum class IntroStatus { SameCommit, DifferentCommits };

// Consistent covers both "removed in the same commit" and "both remain".
enum class RemovalStatus { Consistent, DifferentCommits, OneRemovedOneRemains };

// Finer split used for the four-way breakdown.
enum class RemovalDetail { RemovedSameCommit, BothRemain, DifferentCommits, OneRemovedOneRemains };

enum class MicroCloneStatus { NotEvaluated, Clone, NotClone, Unevaluable };

std::string_view to_string(IntroStatus s);
std::string_view to_string(RemovalStatus s);
std::string_view to_string(RemovalDetail s);
std::string_view to_string(MicroCloneStatus s);
IntroStatus intro_status_from_string(std::string_view s);
RemovalStatus removal_status_from_string(std::string_view s);
RemovalDetail removal_detail_from_string(std::string_view s);
MicroCloneStatus micro_clone_status_from_string(std::string_view s);

struct CommentPair {
  std::uint64_t group_id = 0;
  SatdId satd_a = 0; // satd_a < satd_b
  SatdId satd_b = 0;
  bool same_file = false;
  IntroStatus intro_status = IntroStatus::DifferentCommits;
  RemovalStatus removal_status = RemovalStatus::Consistent;
  RemovalDetail removal_detail = RemovalDetail::BothRemain;
  std::optional<double> removal_delta_days;
  MicroCloneStatus micro_clone = MicroCloneStatus::NotEvaluated;
  std::optional<double> micro_clone_similarity;

  bool operator==(const CommentPair &) const = default;
};

struct GroupFileStats {
  std::uint64_t group_id = 0;
  std::size_t n = 0;
  std::size_t pair_count = 0;
  std::size_t m = 0;
  double same_file_ratio = 0.0;

  bool operator==(const GroupFileStats &) const = default;
};

// All n(n-1)/2 unordered member pairs, statuses left at their defaults.
std::vector<CommentPair> make_pairs(const DuplicateGroup &group);

// Same-file means same lineage (file_id), so renames do not split a file.
GroupFileStats same_file_ratio(const DuplicateGroup &group, const CorpusIndex &corpus);

IntroStatus classify_introduction(const CommentPair &pair, const CorpusIndex &corpus);

struct RemovalClassification {
  RemovalStatus status = RemovalStatus::Consistent;
  RemovalDetail detail = RemovalDetail::BothRemain;
  std::optional<double> delta_days; // both deleted
};

RemovalClassification classify_removal(const CommentPair &pair, const CorpusIndex &corpus);

// Fills same_file, intro and removal fields of every pair.
void classify_pairs(std::vector<CommentPair> &pairs, const CorpusIndex &corpus);

struct DeltaSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;

  bool operator==(const DeltaSummary &) const = default;
};

// Absent for an empty input.
std::optional<DeltaSummary> summarize_deltas(std::vector<double> deltas);

// Summary over the pairs introduced in one commit and removed in different
// commits.
std::optional<DeltaSummary> removal_delta_summary(const std::vector<CommentPair> &pairs);

struct MicroCloneConfig {
  std::size_t window = 5;
  double similarity_threshold = 0.70;

  void validate() const;
  bool operator==(const MicroCloneConfig &) const = default;
};

// Code lines of a window with comments and blank lines dropped, whitespace
// collapsed, identifiers replaced by "ID" and literals by "LIT".
std::vector<std::string> normalize_window(const std::vector<std::string> &lines);

// |LCS(a, b)| / max(|a|, |b|); 0 when both are empty.
double window_similarity(const std::vector<std::string> &a, const std::vector<std::string> &b);

// Lines [line - window, line + window] of `content`, clipped at the file
// boundaries.
std::vector<std::string> context_window(const std::string &content, std::size_t line,
                                        std::size_t window);

// File content at (commit, path), or nullopt when unavailable.
using SnapshotSource =
    std::function<std::optional<std::string>(const std::string &commit, const std::string &path)>;

struct MicroCloneResult {
  MicroCloneStatus status = MicroCloneStatus::Unevaluable;
  std::optional<double> similarity;
};

// Heuristic stand-in for reading the code around both comments: compares
// the normalized windows at each comment's creation commit.
MicroCloneResult micro_clone_context(const CommentPair &pair, const CorpusIndex &corpus,
                                     const SnapshotSource &snapshots,
                                     const MicroCloneConfig &config);

struct ClonePlacement {
  std::string file_path;
  std::size_t start_line = 1;
  std::size_t end_line = 1;
  std::string clone_class_id;

  bool operator==(const ClonePlacement &) const = default;
};

// Rows "file_path,start_line,end_line,clone_class_id"; a header row is
// optional. Throws satd::Error (stage "analyze") naming the bad row.
std::vector<ClonePlacement> parse_clone_placements(std::istream &in);
std::vector<ClonePlacement> ingest_clone_placements(const std::filesystem::path &path);

// True iff every member's creation location lies in a placement and one
// clone class covers all of them.
bool group_in_clone(const DuplicateGroup &group, const CorpusIndex &corpus,
                    const std::vector<ClonePlacement> &placements);

} // namespace satd
