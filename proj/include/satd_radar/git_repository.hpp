#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satd {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv[0] (looked up in PATH) without a shell. Throws satd::Error
// (stage "mine") only when the process cannot be started at all.
ProcessResult run_process(const std::vector<std::string> &argv,
                          const std::filesystem::path &cwd = {},
                          std::string_view input = {});

// One path-level change between two trees, as reported by git with rename
// detection disabled.
struct TreeChange {
  char status = 'M'; // 'A', 'D' or 'M'
  std::string path;
  std::string old_blob; // empty for 'A'
  std::string new_blob; // empty for 'D'
};

struct LogEntry {
  std::string id;
  std::vector<std::string> parent_ids;
  long long author_timestamp = 0;
};

// Thin read-only view of a git repository driven through the git CLI.
// Blob reads go through one long-lived `git cat-file --batch` process and
// are serialized internally, so a repository may be shared across threads.
class GitRepository {
public:
  explicit GitRepository(std::filesystem::path path);
  ~GitRepository();
  GitRepository(const GitRepository &) = delete;
  GitRepository &operator=(const GitRepository &) = delete;

  const std::filesystem::path &path() const { return path_; }

  // Full hash of the commit `rev` names, or nullopt if it does not resolve.
  std::optional<std::string> resolve_commit(const std::string &rev) const;

  // First-parent history ending at `head`, oldest first.
  std::vector<LogEntry> first_parent_log(const std::string &head) const;

  // Regular-file changes from `parent` (root commit when absent) to `commit`.
  std::vector<TreeChange> diff_tree(const std::optional<std::string> &parent,
                                    const std::string &commit) const;

  std::string read_blob(const std::string &blob_id) const;

  // Content of `path` at `commit`, or nullopt when the path is absent.
  std::optional<std::string> read_file_at(const std::string &commit,
                                          const std::string &path) const;

private:
  class BatchReader;

  ProcessResult git(const std::vector<std::string> &args) const;

  std::filesystem::path path_;
  mutable std::mutex batch_mutex_;
  mutable std::unique_ptr<BatchReader> batch_;
};

} // namespace satd
