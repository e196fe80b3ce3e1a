#include "satd_radar/history.hpp"

#include "satd_radar/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

namespace satd {

std::string FileLineage::path_at(std::size_t commit_index) const {
  for (const auto &s : segments)
    if (s.first_commit_index <= commit_index && commit_index <= s.last_commit_index)
      return s.path;
  return {};
}

std::vector<CommitMeta> extract_main_chain(const GitRepository &repo, const std::string &branch) {
  std::optional<std::string> head;
  std::string used = branch.empty() ? "master" : branch;
  head = repo.resolve_commit(used);
  if (!head && used == "master") {
    used = "main";
    head = repo.resolve_commit(used);
  }
  if (!head)
    throw Error("mine", "unresolvable branch: " + (branch.empty() ? std::string("master") : branch));

  auto log = repo.first_parent_log(*head);
  std::vector<CommitMeta> chain;
  chain.reserve(log.size());
  for (auto &e : log) {
    if (!chain.empty() && (e.parent_ids.empty() || e.parent_ids.front() != chain.back().id))
      throw Error("mine", "broken first-parent chain at commit " + e.id);
    CommitMeta c;
    c.id = std::move(e.id);
    c.parent_ids = std::move(e.parent_ids);
    c.author_timestamp = e.author_timestamp;
    c.order_index = chain.size();
    chain.push_back(std::move(c));
  }
  if (chain.empty())
    throw Error("mine", "empty history for branch " + used);
  return chain;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

struct Move {
  std::string source;
  std::string target;
};

// Exact matches between added paths and deleted paths, by blob id.
void match_exact_add_delete(const std::vector<const TreeChange *> &added,
                            const std::vector<const TreeChange *> &deleted,
                            std::set<std::string> &used_sources,
                            std::set<std::string> &used_targets, std::vector<Move> &moves) {
  std::multimap<std::string, const TreeChange *> by_blob;
  for (const auto *d : deleted)
    by_blob.emplace(d->old_blob, d);
  for (const auto *a : added) {
    auto [lo, hi] = by_blob.equal_range(a->new_blob);
    for (auto it = lo; it != hi; ++it) {
      if (used_sources.count(it->second->path))
        continue;
      used_sources.insert(it->second->path);
      used_targets.insert(a->path);
      moves.push_back({it->second->path, a->path});
      break;
    }
  }
}

// Name swaps and rotations: git reports them as plain modifications, so
// look for cycles where each modified path's new content is another
// modified path's old content.
void match_modified_cycles(const std::vector<const TreeChange *> &modified,
                           std::vector<Move> &moves, std::set<std::string> &cycled) {
  std::map<std::string, const TreeChange *> by_path;
  for (const auto *m : modified)
    by_path.emplace(m->path, m);

  std::map<std::string, std::string> next; // source -> target
  std::set<std::string> taken_sources;
  for (const auto *t : modified) {
    for (const auto *s : modified) {
      if (s == t || taken_sources.count(s->path) || s->old_blob != t->new_blob)
        continue;
      next[s->path] = t->path;
      taken_sources.insert(s->path);
      break;
    }
  }

  for (const auto &[start, unused] : next) {
    if (cycled.count(start))
      continue;
    std::vector<std::string> walk{start};
    std::string cur = start;
    bool closed = false;
    while (true) {
      auto it = next.find(cur);
      if (it == next.end())
        break;
      if (it->second == start) {
        closed = true;
        break;
      }
      if (std::find(walk.begin(), walk.end(), it->second) != walk.end())
        break;
      cur = it->second;
      walk.push_back(cur);
    }
    if (!closed)
      continue;
    for (const auto &p : walk) {
      cycled.insert(p);
      moves.push_back({p, next[p]});
    }
  }
}

} // namespace

double line_set_similarity(std::string_view a, std::string_view b) {
  auto to_set = [](std::string_view text) {
    std::set<std::string_view> out;
    for (std::size_t start = 0; start <= text.size();) {
      auto nl = text.find('\n', start);
      auto line = trim(text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                         : nl - start));
      if (!line.empty())
        out.insert(line);
      if (nl == std::string_view::npos)
        break;
      start = nl + 1;
    }
    return out;
  };
  auto sa = to_set(a);
  auto sb = to_set(b);
  if (sa.empty() && sb.empty())
    return 1.0;
  std::size_t common = 0;
  for (auto l : sa)
    common += sb.count(l);
  std::size_t uni = sa.size() + sb.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<FileLineage> build_file_lineages(const GitRepository &repo,
                                             const std::vector<CommitMeta> &chain,
                                             double rename_similarity) {
  if (chain.empty())
    throw Error("mine", "cannot build lineages for an empty chain");

  std::vector<FileLineage> lineages;
  std::map<std::string, std::size_t> live; // path -> index into lineages

  auto start_lineage = [&](const std::string &path, std::size_t ci, const std::string &blob) {
    FileLineage l;
    l.file_id = lineages.size() + 1;
    l.segments.push_back({path, ci, ci});
    l.versions.push_back({ci, blob});
    lineages.push_back(std::move(l));
    return lineages.size() - 1;
  };

  for (std::size_t ci = 0; ci < chain.size(); ++ci) {
    const auto &commit = chain[ci];
    std::optional<std::string> parent;
    if (!commit.parent_ids.empty())
      parent = commit.parent_ids.front();
    auto changes = repo.diff_tree(parent, commit.id);
    std::sort(changes.begin(), changes.end(),
              [](const TreeChange &x, const TreeChange &y) { return x.path < y.path; });

    std::vector<const TreeChange *> added, deleted, modified;
    for (const auto &c : changes) {
      if (c.status == 'A')
        added.push_back(&c);
      else if (c.status == 'D')
        deleted.push_back(&c);
      else
        modified.push_back(&c);
    }

    std::vector<Move> moves;
    std::set<std::string> used_sources, used_targets, cycled;
    match_exact_add_delete(added, deleted, used_sources, used_targets, moves);
    match_modified_cycles(modified, moves, cycled);

    // Similarity pass over what is left of the add/delete pairs.
    std::vector<const TreeChange *> rest_added, rest_deleted;
    for (const auto *a : added)
      if (!used_targets.count(a->path))
        rest_added.push_back(a);
    for (const auto *d : deleted)
      if (!used_sources.count(d->path))
        rest_deleted.push_back(d);
    if (!rest_added.empty() && !rest_deleted.empty()) {
      std::vector<std::string> add_text, del_text;
      for (const auto *a : rest_added)
        add_text.push_back(repo.read_blob(a->new_blob));
      for (const auto *d : rest_deleted)
        del_text.push_back(repo.read_blob(d->old_blob));
      std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
      for (std::size_t i = 0; i < rest_added.size(); ++i)
        for (std::size_t j = 0; j < rest_deleted.size(); ++j) {
          double s = line_set_similarity(add_text[i], del_text[j]);
          if (s >= rename_similarity)
            candidates.emplace_back(-s, i, j);
        }
      std::sort(candidates.begin(), candidates.end());
      std::set<std::size_t> ai, dj;
      for (const auto &[neg, i, j] : candidates) {
        if (ai.count(i) || dj.count(j))
          continue;
        ai.insert(i);
        dj.insert(j);
        used_targets.insert(rest_added[i]->path);
        used_sources.insert(rest_deleted[j]->path);
        moves.push_back({rest_deleted[j]->path, rest_added[i]->path});
      }
    }

    std::map<std::string, const TreeChange *> by_path;
    for (const auto &c : changes)
      by_path.emplace(c.path, &c);

    auto next_live = live;
    for (const auto &m : moves)
      next_live.erase(m.source);
    for (const auto &m : moves) {
      auto it = live.find(m.source);
      if (it == live.end())
        throw Error("mine", "rename source " + m.source + " unknown at commit " + commit.id);
      auto &l = lineages[it->second];
      l.segments.back().last_commit_index = ci - 1;
      l.segments.push_back({m.target, ci, ci});
      const auto &blob = by_path.at(m.target)->new_blob;
      if (l.versions.back().blob_id != blob)
        l.versions.push_back({ci, blob});
      next_live[m.target] = it->second;
    }
    for (const auto *c : modified) {
      if (cycled.count(c->path))
        continue;
      auto &l = lineages[live.at(c->path)];
      l.versions.push_back({ci, c->new_blob});
    }
    for (const auto *d : deleted) {
      if (used_sources.count(d->path))
        continue;
      auto &l = lineages[live.at(d->path)];
      l.segments.back().last_commit_index = ci - 1;
      l.terminated_at = ci;
      next_live.erase(d->path);
    }
    for (const auto *a : added) {
      if (used_targets.count(a->path))
        continue;
      next_live[a->path] = start_lineage(a->path, ci, a->new_blob);
    }
    live = std::move(next_live);
  }

  for (const auto &[path, idx] : live)
    lineages[idx].segments.back().last_commit_index = chain.size() - 1;
  for (auto &l : lineages)
    l.final_path = l.segments.back().path;
  return lineages;
}

std::vector<Hunk> diff_versions(const Lines &before, const Lines &after, const CommitMeta &commit,
                                std::size_t file_id) {
  std::vector<Hunk> out;
  for (auto &c : diff_lines(before, after)) {
    Hunk h;
    h.commit_id = commit.id;
    h.commit_index = commit.order_index;
    h.file_id = file_id;
    h.old_start = c.old_start;
    h.old_len = c.removed.size();
    h.new_start = c.new_start;
    h.removed_lines = std::move(c.removed);
    h.added_lines = std::move(c.added);
    out.push_back(std::move(h));
  }
  return out;
}

HunkStream ordered_hunks(const GitRepository &repo, const FileLineage &lineage,
                         const std::vector<CommitMeta> &chain) {
  HunkStream stream;
  stream.file_id = lineage.file_id;
  Lines doc = split_lines("");
  for (const auto &v : lineage.versions) {
    if (v.commit_index >= chain.size())
      throw Error("mine", "lineage " + std::to_string(lineage.file_id) +
                              " does not belong to this chain");
    std::string content = repo.read_blob(v.blob_id);
    if (content.find('\0') != std::string::npos) {
      stream.hunks.clear();
      stream.warning = "binary content in " + lineage.path_at(v.commit_index) + " at commit " +
                       chain[v.commit_index].id + "; lineage skipped";
      return stream;
    }
    Lines next = split_lines(content);
    auto hunks = diff_versions(doc, next, chain[v.commit_index], lineage.file_id);
    for (auto &h : hunks) {
      h.sequence_index = stream.hunks.size();
      stream.hunks.push_back(std::move(h));
    }
    doc = std::move(next);
  }
  return stream;
}

void apply_commit_hunks(Lines &doc, const std::vector<Hunk> &commit_hunks) {
  std::vector<LineChange> changes;
  changes.reserve(commit_hunks.size());
  for (const auto &h : commit_hunks)
    changes.push_back({h.old_start, h.new_start, h.removed_lines, h.added_lines});
  apply_changes(doc, changes);
}

std::string replay(const std::vector<Hunk> &hunks) {
  Lines doc = split_lines("");
  std::size_t i = 0;
  while (i < hunks.size()) {
    std::size_t j = i;
    while (j < hunks.size() && hunks[j].commit_index == hunks[i].commit_index)
      ++j;
    apply_commit_hunks(doc, {hunks.begin() + static_cast<long>(i),
                             hunks.begin() + static_cast<long>(j)});
    i = j;
  }
  return join_lines(doc);
}

} // namespace satd
