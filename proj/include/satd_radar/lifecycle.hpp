#pragma once

#include "satd_radar/comments.hpp"
#include "satd_radar/history.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace satd {

// One tracked SATD comment from creation to its final state.
struct SatdComment {
  std::uint64_t satd_id = 0;
  std::string project;
  std::size_t file_id = 0;
  std::string file_path_at_creation;
  std::string created_in_commit;
  std::size_t created_in_line = 1;
  long long created_timestamp = 0;
  std::optional<std::size_t> current_line;
  std::optional<std::string> deleted_in_commit;
  std::optional<long long> deleted_timestamp;
  std::string raw_text;
  std::string clean_text;
  std::vector<std::string> tags_found;
  FilterOutcome filter = FilterOutcome::Kept;

  // Chain positions; not serialized.
  std::size_t created_commit_index = 0;
  std::optional<std::size_t> deleted_commit_index;

  bool deleted() const { return deleted_in_commit.has_value(); }
  void mark_deleted(const CommitMeta &commit);

  bool operator==(const SatdComment &) const = default;
};

// A SATD comment visible in a post-commit snapshot.
struct VisibleSatd {
  std::size_t start_line = 1;
  std::size_t end_line = 1;
  std::string raw_text;
  CleanSatdText text;
};

// SATD comments of a document, in source order.
std::vector<VisibleSatd> visible_satd(const Lines &doc);

enum class StepResult { Shifted, Moved, Deleted };

// Advances a live record across the hunks of one commit. `after` lists the
// SATD comments visible once the commit is applied; `claimed` holds indices
// into `after` already owned by other records and is updated on a move.
StepResult advance_record(SatdComment &record, const std::vector<Hunk> &commit_hunks,
                          const CommitMeta &commit, const std::vector<VisibleSatd> &after,
                          std::set<std::size_t> &claimed);

// Follows a record through the hunks that come after its creation hunk,
// using only the hunk text to recognize moves.
SatdComment track_to_final_state(SatdComment record, const std::vector<Hunk> &later_hunks,
                                 const std::vector<CommitMeta> &chain);

// Per-lineage tracker that keeps the replayed snapshot alongside the
// records, so each commit is checked against the real file content.
class LifecycleTracker {
public:
  LifecycleTracker(const FileLineage &lineage, const std::vector<CommitMeta> &chain,
                   AutoGeneratedPatterns patterns = {});

  void apply_commit(const std::vector<Hunk> &commit_hunks);
  void terminate(std::size_t commit_index);

  const Lines &snapshot() const { return doc_; }
  const std::vector<SatdComment> &records() const { return records_; }

private:
  const FileLineage &lineage_;
  const std::vector<CommitMeta> &chain_;
  AutoGeneratedPatterns patterns_;
  Lines doc_;
  std::vector<SatdComment> records_;
};

// Records for one lineage given its ordered hunks, including deletion of
// everything still alive when the file itself is deleted.
std::vector<SatdComment> scan_for_satd(const FileLineage &lineage, const std::vector<Hunk> &hunks,
                                       const std::vector<CommitMeta> &chain,
                                       const AutoGeneratedPatterns &patterns = {});

// Sorts by (file_id, creation order, line, text) and numbers from 1.
void assign_satd_ids(std::vector<SatdComment> &records);

} // namespace satd
