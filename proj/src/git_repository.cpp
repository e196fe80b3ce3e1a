#include "satd_radar/git_repository.hpp"

#include "satd_radar/error.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace satd {

namespace {

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fd, O_CLOEXEC) != 0)
      throw Error("mine", std::string("pipe failed: ") + std::strerror(errno));
  }
  ~Pipe() { close_both(); }
  void close_read() { close_fd(fd[0]); }
  void close_write() { close_fd(fd[1]); }
  void close_both() {
    close_read();
    close_write();
  }
  static void close_fd(int &f) {
    if (f >= 0) {
      ::close(f);
      f = -1;
    }
  }
};

std::vector<char *> make_argv(const std::vector<std::string> &argv) {
  std::vector<char *> out;
  out.reserve(argv.size() + 1);
  for (const auto &a : argv)
    out.push_back(const_cast<char *>(a.c_str()));
  out.push_back(nullptr);
  return out;
}

[[noreturn]] void exec_child(const std::vector<std::string> &argv,
                             const std::filesystem::path &cwd) {
  if (!cwd.empty() && ::chdir(cwd.c_str()) != 0)
    ::_exit(127);
  auto args = make_argv(argv);
  ::execvp(args[0], args.data());
  ::_exit(127);
}

bool write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR)
        continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

bool read_exact(int fd, std::string &buf, std::size_t count) {
  std::size_t start = buf.size();
  buf.resize(start + count);
  std::size_t got = 0;
  while (got < count) {
    ssize_t n = ::read(fd, buf.data() + start + got, count - got);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0)
      return false;
    got += static_cast<std::size_t>(n);
  }
  return true;
}

} // namespace

ProcessResult run_process(const std::vector<std::string> &argv,
                          const std::filesystem::path &cwd,
                          std::string_view input) {
  Pipe in, out, err;
  pid_t pid = ::fork();
  if (pid < 0)
    throw Error("mine", std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in.fd[0], STDIN_FILENO);
    ::dup2(out.fd[1], STDOUT_FILENO);
    ::dup2(err.fd[1], STDERR_FILENO);
    exec_child(argv, cwd);
  }
  in.close_read();
  out.close_write();
  err.close_write();

  // Small inputs only; written up front before draining output.
  write_all(in.fd[1], input);
  in.close_write();

  ProcessResult result;
  pollfd fds[2] = {{out.fd[0], POLLIN, 0}, {err.fd[0], POLLIN, 0}};
  std::string *sinks[2] = {&result.out, &result.err};
  int open = 2;
  char buf[65536];
  while (open > 0) {
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR)))
        continue;
      ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      if (n > 0) {
        sinks[i]->append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        fds[i].fd = -1;
        --open;
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (result.exit_code == 127 && result.out.empty() && result.err.empty())
    throw Error("mine", "cannot execute '" + argv.front() + "'");
  return result;
}

class GitRepository::BatchReader {
public:
  explicit BatchReader(const std::filesystem::path &repo) {
    // A dead cat-file must surface as a write error, not kill the process.
    std::signal(SIGPIPE, SIG_IGN);
    Pipe in, out;
    pid_ = ::fork();
    if (pid_ < 0)
      throw Error("mine", "fork failed for git cat-file");
    if (pid_ == 0) {
      ::dup2(in.fd[0], STDIN_FILENO);
      ::dup2(out.fd[1], STDOUT_FILENO);
      int devnull = ::open("/dev/null", O_WRONLY);
      if (devnull >= 0)
        ::dup2(devnull, STDERR_FILENO);
      exec_child({"git", "-C", repo.string(), "cat-file", "--batch"}, {});
    }
    in.close_read();
    out.close_write();
    to_child_ = in.fd[1];
    from_child_ = out.fd[0];
    in.fd[1] = -1;
    out.fd[0] = -1;
  }

  ~BatchReader() {
    if (to_child_ >= 0)
      ::close(to_child_);
    if (from_child_ >= 0)
      ::close(from_child_);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }

  // Returns nullopt for missing objects.
  std::optional<std::string> read(const std::string &object) {
    if (!write_all(to_child_, object + "\n"))
      throw Error("mine", "object store read failed for " + object);
    std::string header;
    char c = 0;
    while (true) {
      ssize_t n = ::read(from_child_, &c, 1);
      if (n < 0 && errno == EINTR)
        continue;
      if (n <= 0)
        throw Error("mine", "object store read failed for " + object);
      if (c == '\n')
        break;
      header.push_back(c);
    }
    if (header.ends_with(" missing") || header.ends_with(" ambiguous"))
      return std::nullopt;
    std::istringstream hs(header);
    std::string id, type;
    std::size_t size = 0;
    if (!(hs >> id >> type >> size))
      throw Error("mine", "corrupt object header for " + object + ": " + header);
    std::string body;
    if (!read_exact(from_child_, body, size + 1))
      throw Error("mine", "truncated object " + object);
    body.pop_back(); // trailing LF after the object body
    return body;
  }

private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
};

GitRepository::GitRepository(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(path_, ec))
    throw Error("mine", "repository not found: " + path_.string());
  auto r = git({"rev-parse", "--git-dir"});
  if (r.exit_code != 0)
    throw Error("mine", "not a git repository: " + path_.string());
}

GitRepository::~GitRepository() = default;

ProcessResult GitRepository::git(const std::vector<std::string> &args) const {
  std::vector<std::string> argv{"git", "-C", path_.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  return run_process(argv);
}

std::optional<std::string> GitRepository::resolve_commit(const std::string &rev) const {
  auto r = git({"rev-parse", "--verify", "--quiet", rev + "^{commit}"});
  if (r.exit_code != 0)
    return std::nullopt;
  std::string id = r.out;
  while (!id.empty() && (id.back() == '\n' || id.back() == '\r'))
    id.pop_back();
  return id;
}

std::vector<LogEntry> GitRepository::first_parent_log(const std::string &head) const {
  auto r = git({"log", "--first-parent", "--reverse", "--format=%H%x09%P%x09%at", head});
  if (r.exit_code != 0)
    throw Error("mine", "cannot read history of " + head + ": " + r.err);
  std::vector<LogEntry> entries;
  std::istringstream lines(r.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty())
      continue;
    auto t1 = line.find('\t');
    auto t2 = line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw Error("mine", "corrupt log record: " + line);
    LogEntry e;
    e.id = line.substr(0, t1);
    std::istringstream parents(line.substr(t1 + 1, t2 - t1 - 1));
    std::string p;
    while (parents >> p)
      e.parent_ids.push_back(p);
    try {
      e.author_timestamp = std::stoll(line.substr(t2 + 1));
    } catch (...) {
      throw Error("mine", "corrupt author time in commit " + e.id);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<TreeChange> GitRepository::diff_tree(const std::optional<std::string> &parent,
                                                 const std::string &commit) const {
  std::vector<std::string> args{"diff-tree", "-r", "-z", "--no-renames", "--no-commit-id"};
  if (parent) {
    args.push_back(*parent);
  } else {
    args.push_back("--root");
  }
  args.push_back(commit);
  auto r = git(args);
  if (r.exit_code != 0)
    throw Error("mine", "cannot diff commit " + commit + ": " + r.err);

  static const std::string null_blob(40, '0');
  std::vector<TreeChange> changes;
  const std::string &s = r.out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto meta_end = s.find('\0', pos);
    auto path_end = meta_end == std::string::npos ? meta_end : s.find('\0', meta_end + 1);
    if (path_end == std::string::npos || s[pos] != ':')
      throw Error("mine", "corrupt tree diff for commit " + commit);
    std::istringstream meta(s.substr(pos + 1, meta_end - pos - 1));
    std::string old_mode, new_mode, old_blob, new_blob, status;
    meta >> old_mode >> new_mode >> old_blob >> new_blob >> status;
    std::string path = s.substr(meta_end + 1, path_end - meta_end - 1);
    pos = path_end + 1;

    auto regular = [](const std::string &mode) { return mode == "100644" || mode == "100755"; };
    bool old_file = regular(old_mode) && old_blob != null_blob;
    bool new_file = regular(new_mode) && new_blob != null_blob;
    TreeChange c;
    c.path = std::move(path);
    if (old_file && new_file) {
      c.status = 'M';
      c.old_blob = old_blob;
      c.new_blob = new_blob;
    } else if (new_file) {
      c.status = 'A';
      c.new_blob = new_blob;
    } else if (old_file) {
      c.status = 'D';
      c.old_blob = old_blob;
    } else {
      continue; // submodules, symlinks
    }
    changes.push_back(std::move(c));
  }
  return changes;
}

std::string GitRepository::read_blob(const std::string &blob_id) const {
  std::lock_guard lock(batch_mutex_);
  if (!batch_)
    batch_ = std::make_unique<BatchReader>(path_);
  auto body = batch_->read(blob_id);
  if (!body)
    throw Error("mine", "missing object " + blob_id);
  return *body;
}

std::optional<std::string> GitRepository::read_file_at(const std::string &commit,
                                                       const std::string &path) const {
  std::lock_guard lock(batch_mutex_);
  if (!batch_)
    batch_ = std::make_unique<BatchReader>(path_);
  return batch_->read(commit + ":" + path);
}

} // namespace satd
