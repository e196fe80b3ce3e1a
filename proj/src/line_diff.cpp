#include "satd_radar/line_diff.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace satd {

Lines split_lines(std::string_view text) {
  Lines out;
  std::size_t start = 0;
  while (true) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::string join_lines(const Lines &lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i)
      out.push_back('\n');
    out += lines[i];
  }
  return out;
}

namespace {

enum class Op : std::uint8_t { Keep, Delete, Insert };

// Greedy forward Myers over integer tokens, keeping one V snapshot per
// edit distance for the backtrack. Returns false when the distance exceeds
// the cap.
bool myers(const std::vector<int> &a, const std::vector<int> &b, std::size_t max_d,
           std::vector<Op> &script) {
  const long n = static_cast<long>(a.size());
  const long m = static_cast<long>(b.size());
  const long max = std::min<long>(n + m, static_cast<long>(max_d));
  const long offset = max + 1;
  std::vector<long> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<long>> trace;

  long found_d = -1;
  for (long d = 0; d <= max; ++d) {
    trace.emplace_back(v.begin() + (offset - d - 1), v.begin() + (offset + d + 2));
    for (long k = -d; k <= d; k += 2) {
      long x;
      if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1]))
        x = v[offset + k + 1];
      else
        x = v[offset + k - 1] + 1;
      long y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[offset + k] = x;
      if (x >= n && y >= m) {
        found_d = d;
        break;
      }
    }
    if (found_d >= 0)
      break;
  }
  if (found_d < 0)
    return false;

  // trace[d] holds V before step d, indices k in [-d-1, d+1] at k + d + 1.
  std::vector<Op> rev;
  long x = n, y = m;
  for (long d = found_d; d > 0; --d) {
    const auto &vd = trace[static_cast<std::size_t>(d)];
    auto at = [&](long k) { return vd[static_cast<std::size_t>(k + d + 1)]; };
    long k = x - y;
    long prev_k;
    if (k == -d || (k != d && at(k - 1) < at(k + 1)))
      prev_k = k + 1;
    else
      prev_k = k - 1;
    long prev_x = at(prev_k);
    long prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      rev.push_back(Op::Keep);
      --x;
      --y;
    }
    if (x == prev_x)
      rev.push_back(Op::Insert);
    else
      rev.push_back(Op::Delete);
    x = prev_x;
    y = prev_y;
  }
  while (x > 0 && y > 0) {
    rev.push_back(Op::Keep);
    --x;
    --y;
  }
  script.assign(rev.rbegin(), rev.rend());
  return true;
}

} // namespace

std::vector<LineChange> diff_lines(const Lines &before, const Lines &after,
                                   std::size_t max_edit_distance) {
  std::size_t prefix = 0;
  while (prefix < before.size() && prefix < after.size() && before[prefix] == after[prefix])
    ++prefix;
  std::size_t suffix = 0;
  while (suffix < before.size() - prefix && suffix < after.size() - prefix &&
         before[before.size() - 1 - suffix] == after[after.size() - 1 - suffix])
    ++suffix;

  std::unordered_map<std::string_view, int> ids;
  auto tokenize = [&](const Lines &src) {
    std::vector<int> out;
    out.reserve(src.size() - prefix - suffix);
    for (std::size_t i = prefix; i + suffix < src.size(); ++i)
      out.push_back(ids.try_emplace(src[i], static_cast<int>(ids.size())).first->second);
    return out;
  };
  auto a = tokenize(before);
  auto b = tokenize(after);

  std::vector<Op> script;
  if (!myers(a, b, max_edit_distance, script)) {
    script.assign(a.size(), Op::Delete);
    script.insert(script.end(), b.size(), Op::Insert);
  }

  std::vector<LineChange> changes;
  std::size_t oi = prefix, ni = prefix;
  std::size_t i = 0;
  while (i < script.size()) {
    if (script[i] == Op::Keep) {
      ++oi;
      ++ni;
      ++i;
      continue;
    }
    LineChange c;
    c.old_start = oi + 1;
    c.new_start = ni + 1;
    while (i < script.size() && script[i] != Op::Keep) {
      if (script[i] == Op::Delete)
        c.removed.push_back(before[oi++]);
      else
        c.added.push_back(after[ni++]);
      ++i;
    }
    changes.push_back(std::move(c));
  }
  return changes;
}

void apply_changes(Lines &doc, const std::vector<LineChange> &changes) {
  Lines out;
  out.reserve(doc.size());
  std::size_t cursor = 0; // 0-based index into doc
  for (const auto &c : changes) {
    std::size_t begin = c.old_start - 1;
    if (begin < cursor || begin + c.removed.size() > doc.size())
      throw std::invalid_argument("change out of range or overlapping");
    out.insert(out.end(), doc.begin() + static_cast<long>(cursor),
               doc.begin() + static_cast<long>(begin));
    out.insert(out.end(), c.added.begin(), c.added.end());
    cursor = begin + c.removed.size();
  }
  out.insert(out.end(), doc.begin() + static_cast<long>(cursor), doc.end());
  doc = std::move(out);
}

} // namespace satd
