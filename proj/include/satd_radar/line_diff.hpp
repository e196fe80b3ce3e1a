#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace satd {

using Lines = std::vector<std::string>;

// Splits on '\n' only, so join_lines(split_lines(s)) == s for every s. A
// trailing newline yields a trailing empty element; "" yields {""}.
Lines split_lines(std::string_view text);
std::string join_lines(const Lines &lines);

// One contiguous change between two line sequences. Positions are 1-based.
// For a pure insertion (removed empty) old_start is the old line the new
// lines are inserted before (old size + 1 for an append); for a pure
// deletion new_start is where the removed lines would have been.
struct LineChange {
  std::size_t old_start = 1;
  std::size_t new_start = 1;
  Lines removed;
  Lines added;

  bool operator==(const LineChange &) const = default;
};

// Myers shortest-edit-script diff. Changes come back sorted by old_start and
// non-overlapping. Past `max_edit_distance` the unmatched middle region is
// emitted as a single replacement, which still round-trips exactly.
std::vector<LineChange> diff_lines(const Lines &before, const Lines &after,
                                   std::size_t max_edit_distance = 4000);

// Applies changes computed against `doc` (sorted, disjoint) in one step.
void apply_changes(Lines &doc, const std::vector<LineChange> &changes);

} // namespace satd
