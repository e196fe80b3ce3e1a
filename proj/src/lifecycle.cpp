#include "satd_radar/lifecycle.hpp"

#include <algorithm>
#include <tuple>

namespace satd {

void SatdComment::mark_deleted(const CommitMeta &commit) {
  current_line.reset();
  deleted_in_commit = commit.id;
  deleted_timestamp = commit.author_timestamp;
  deleted_commit_index = commit.order_index;
}

std::vector<VisibleSatd> visible_satd(const Lines &doc) {
  std::vector<VisibleSatd> out;
  for (auto &c : extract_comments(doc)) {
    if (!is_satd(c.text).is_satd)
      continue;
    VisibleSatd v;
    v.start_line = c.start_line;
    v.end_line = c.end_line;
    v.raw_text = to_valid_utf8(c.text);
    v.text = clean(v.raw_text);
    out.push_back(std::move(v));
  }
  return out;
}

StepResult advance_record(SatdComment &record, const std::vector<Hunk> &commit_hunks,
                          const CommitMeta &commit, const std::vector<VisibleSatd> &after,
                          std::set<std::size_t> &claimed) {
  const std::size_t line = *record.current_line;
  long delta = 0;
  for (const auto &h : commit_hunks) {
    bool covers = h.old_len > 0 && h.old_start <= line && line < h.old_start + h.old_len;
    if (covers) {
      const std::size_t lo = h.new_start;
      const std::size_t hi = h.new_start + h.added_lines.size();
      for (std::size_t i = 0; i < after.size(); ++i) {
        const auto &v = after[i];
        if (v.start_line < lo || v.start_line >= hi || claimed.count(i))
          continue;
        if (v.text.clean != record.clean_text)
          continue;
        claimed.insert(i);
        record.current_line = v.start_line;
        record.raw_text = v.raw_text;
        record.tags_found = v.text.tags_found;
        return StepResult::Moved;
      }
      record.mark_deleted(commit);
      return StepResult::Deleted;
    }
    if (h.old_start + h.old_len <= line)
      delta += static_cast<long>(h.added_lines.size()) - static_cast<long>(h.old_len);
  }
  record.current_line = static_cast<std::size_t>(static_cast<long>(line) + delta);
  return StepResult::Shifted;
}

SatdComment track_to_final_state(SatdComment record, const std::vector<Hunk> &later_hunks,
                                 const std::vector<CommitMeta> &chain) {
  std::size_t i = 0;
  while (i < later_hunks.size() && !record.deleted()) {
    std::size_t j = i;
    while (j < later_hunks.size() && later_hunks[j].commit_index == later_hunks[i].commit_index)
      ++j;
    std::vector<Hunk> commit_hunks(later_hunks.begin() + static_cast<long>(i),
                                   later_hunks.begin() + static_cast<long>(j));
    // Without the snapshot, candidate move targets are the added lines
    // scanned on their own.
    std::vector<VisibleSatd> after;
    for (const auto &h : commit_hunks)
      for (std::size_t k = 0; k < h.added_lines.size(); ++k)
        for (auto &v : visible_satd({h.added_lines[k]})) {
          v.start_line = v.end_line = h.new_start + k;
          after.push_back(std::move(v));
        }
    std::set<std::size_t> claimed;
    advance_record(record, commit_hunks, chain.at(commit_hunks.front().commit_index), after,
                   claimed);
    i = j;
  }
  return record;
}

LifecycleTracker::LifecycleTracker(const FileLineage &lineage,
                                   const std::vector<CommitMeta> &chain,
                                   AutoGeneratedPatterns patterns)
    : lineage_(lineage), chain_(chain), patterns_(std::move(patterns)), doc_(split_lines("")) {}

void LifecycleTracker::apply_commit(const std::vector<Hunk> &commit_hunks) {
  if (commit_hunks.empty())
    return;
  const CommitMeta &commit = chain_.at(commit_hunks.front().commit_index);
  apply_commit_hunks(doc_, commit_hunks);
  const auto after = visible_satd(doc_);

  std::vector<SatdComment *> live;
  for (auto &r : records_)
    if (!r.deleted())
      live.push_back(&r);
  std::sort(live.begin(), live.end(), [](const SatdComment *a, const SatdComment *b) {
    return *a->current_line < *b->current_line;
  });

  std::set<std::size_t> claimed;
  std::vector<SatdComment *> shifted;
  for (auto *r : live)
    if (advance_record(*r, commit_hunks, commit, after, claimed) == StepResult::Shifted)
      shifted.push_back(r);

  // Untouched lines can still lose their SATD text, e.g. when another line
  // of the same block comment is edited. That is a deletion.
  for (auto *r : shifted) {
    bool found = false;
    for (std::size_t i = 0; i < after.size(); ++i) {
      if (claimed.count(i) || after[i].start_line != *r->current_line ||
          after[i].text.clean != r->clean_text)
        continue;
      claimed.insert(i);
      r->raw_text = after[i].raw_text;
      r->tags_found = after[i].text.tags_found;
      found = true;
      break;
    }
    if (!found)
      r->mark_deleted(commit);
  }

  // Whatever no live record claimed is new in this commit. That includes
  // comments reshaped by a removal alone, e.g. a line comment swallowed by a
  // block comment whose terminator was deleted.
  for (std::size_t i = 0; i < after.size(); ++i) {
    if (claimed.count(i))
      continue;
    const auto &v = after[i];
    SatdComment r;
    r.file_id = lineage_.file_id;
    r.file_path_at_creation = lineage_.path_at(commit.order_index);
    r.created_in_commit = commit.id;
    r.created_in_line = v.start_line;
    r.created_timestamp = commit.author_timestamp;
    r.created_commit_index = commit.order_index;
    r.current_line = v.start_line;
    r.raw_text = v.raw_text;
    r.clean_text = v.text.clean;
    r.tags_found = v.text.tags_found;
    r.filter = apply_filters(r.clean_text, patterns_);
    records_.push_back(std::move(r));
  }
}

void LifecycleTracker::terminate(std::size_t commit_index) {
  const CommitMeta &commit = chain_.at(commit_index);
  for (auto &r : records_)
    if (!r.deleted())
      r.mark_deleted(commit);
}

std::vector<SatdComment> scan_for_satd(const FileLineage &lineage, const std::vector<Hunk> &hunks,
                                       const std::vector<CommitMeta> &chain,
                                       const AutoGeneratedPatterns &patterns) {
  LifecycleTracker tracker(lineage, chain, patterns);
  std::size_t i = 0;
  while (i < hunks.size()) {
    std::size_t j = i;
    while (j < hunks.size() && hunks[j].commit_index == hunks[i].commit_index)
      ++j;
    tracker.apply_commit({hunks.begin() + static_cast<long>(i), hunks.begin() + static_cast<long>(j)});
    i = j;
  }
  if (lineage.terminated_at)
    tracker.terminate(*lineage.terminated_at);
  return tracker.records();
}

void assign_satd_ids(std::vector<SatdComment> &records) {
  std::stable_sort(records.begin(), records.end(), [](const SatdComment &a, const SatdComment &b) {
    return std::tie(a.file_id, a.created_commit_index, a.created_in_line, a.clean_text) <
           std::tie(b.file_id, b.created_commit_index, b.created_in_line, b.clean_text);
  });
  for (std::size_t i = 0; i < records.size(); ++i)
    records[i].satd_id = i + 1;
}

} // namespace satd
