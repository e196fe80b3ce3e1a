#pragma once

#include "satd_radar/git_repository.hpp"
#include "satd_radar/line_diff.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace satd {

struct CommitMeta {
  std::string id;
  std::vector<std::string> parent_ids;
  long long author_timestamp = 0; // UTC seconds
  std::size_t order_index = 0;

  bool operator==(const CommitMeta &) const = default;
};

struct LineageSegment {
  std::string path;
  std::size_t first_commit_index = 0;
  std::size_t last_commit_index = 0;

  bool operator==(const LineageSegment &) const = default;
};

// A content change of the lineage's file: the blob it holds from
// commit_index on.
struct FileVersion {
  std::size_t commit_index = 0;
  std::string blob_id;

  bool operator==(const FileVersion &) const = default;
};

// Rename-aware identity of one file along the main chain.
struct FileLineage {
  std::size_t file_id = 0;
  std::string final_path;
  std::vector<LineageSegment> segments;
  std::vector<FileVersion> versions;
  // Index of the commit that deleted the file; absent while it lives at head.
  std::optional<std::size_t> terminated_at;

  bool terminated() const { return terminated_at.has_value(); }
  // Path the file had at `commit_index`, or empty if it did not exist then.
  std::string path_at(std::size_t commit_index) const;

  bool operator==(const FileLineage &) const = default;
};

struct Hunk {
  std::string commit_id;
  std::size_t commit_index = 0;
  std::size_t file_id = 0;
  std::size_t old_start = 1;
  std::size_t old_len = 0;
  std::size_t new_start = 1;
  Lines removed_lines;
  Lines added_lines;
  std::size_t sequence_index = 0;

  bool operator==(const Hunk &) const = default;
};

// Hunk stream of one lineage. `warning` is set (and hunks empty) when the
// lineage was skipped, e.g. for binary content.
struct HunkStream {
  std::size_t file_id = 0;
  std::vector<Hunk> hunks;
  std::optional<std::string> warning;
};

// First-parent chain from the root to `branch`, oldest first. An empty
// branch name tries "master" and then "main".
std::vector<CommitMeta> extract_main_chain(const GitRepository &repo,
                                           const std::string &branch = {});

// Lineages for every file that exists at any point of the chain. Renames
// are matched by identical content first, then by line-set similarity of an
// add/delete pair in the same commit.
std::vector<FileLineage> build_file_lineages(const GitRepository &repo,
                                             const std::vector<CommitMeta> &chain,
                                             double rename_similarity = 0.5);

// Jaccard similarity of the sets of trimmed, non-blank lines.
double line_set_similarity(std::string_view a, std::string_view b);

// Hunks taking `before` to `after`, tagged with the commit and lineage.
std::vector<Hunk> diff_versions(const Lines &before, const Lines &after,
                                const CommitMeta &commit, std::size_t file_id);

// Ordered hunk stream of a lineage: consecutive versions diffed along the
// chain, sorted by (commit order, old_start). The file's deletion, if any,
// is not a hunk; see FileLineage::terminated_at.
HunkStream ordered_hunks(const GitRepository &repo, const FileLineage &lineage,
                         const std::vector<CommitMeta> &chain);

// Applies one commit's hunks (sorted, disjoint) to `doc`.
void apply_commit_hunks(Lines &doc, const std::vector<Hunk> &commit_hunks);

// Replays a full stream onto the empty document.
std::string replay(const std::vector<Hunk> &hunks);

} // namespace satd
