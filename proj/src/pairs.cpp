#include "satd_radar/pairs.hpp"

#include "satd_radar/error.hpp"
#include "satd_radar/line_diff.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace satd {

CorpusIndex index_corpus(const std::vector<SatdComment> &corpus) {
  CorpusIndex idx;
  for (const auto &c : corpus)
    idx[c.satd_id] = &c;
  return idx;
}

std::string_view to_string(IntroStatus s) {
  return s == IntroStatus::SameCommit ? "same_commit" : "different_commits";
}

std::string_view to_string(RemovalStatus s) {
  switch (s) {
  case RemovalStatus::Consistent:
    return "consistent";
  case RemovalStatus::DifferentCommits:
    return "different_commits";
  case RemovalStatus::OneRemovedOneRemains:
    return "one_removed_one_remains";
  }
  return "consistent";
}

std::string_view to_string(RemovalDetail s) {
  switch (s) {
  case RemovalDetail::RemovedSameCommit:
    return "removed_same_commit";
  case RemovalDetail::BothRemain:
    return "both_remain";
  case RemovalDetail::DifferentCommits:
    return "different_commits";
  case RemovalDetail::OneRemovedOneRemains:
    return "one_removed_one_remains";
  }
  return "both_remain";
}

std::string_view to_string(MicroCloneStatus s) {
  switch (s) {
  case MicroCloneStatus::NotEvaluated:
    return "not_evaluated";
  case MicroCloneStatus::Clone:
    return "clone";
  case MicroCloneStatus::NotClone:
    return "not_clone";
  case MicroCloneStatus::Unevaluable:
    return "unevaluable";
  }
  return "not_evaluated";
}

IntroStatus intro_status_from_string(std::string_view s) {
  if (s == "same_commit")
    return IntroStatus::SameCommit;
  if (s == "different_commits")
    return IntroStatus::DifferentCommits;
  throw std::invalid_argument("unknown intro status: " + std::string(s));
}

RemovalStatus removal_status_from_string(std::string_view s) {
  if (s == "consistent")
    return RemovalStatus::Consistent;
  if (s == "different_commits")
    return RemovalStatus::DifferentCommits;
  if (s == "one_removed_one_remains")
    return RemovalStatus::OneRemovedOneRemains;
  throw std::invalid_argument("unknown removal status: " + std::string(s));
}

RemovalDetail removal_detail_from_string(std::string_view s) {
  if (s == "removed_same_commit")
    return RemovalDetail::RemovedSameCommit;
  if (s == "both_remain")
    return RemovalDetail::BothRemain;
  if (s == "different_commits")
    return RemovalDetail::DifferentCommits;
  if (s == "one_removed_one_remains")
    return RemovalDetail::OneRemovedOneRemains;
  throw std::invalid_argument("unknown removal detail: " + std::string(s));
}

MicroCloneStatus micro_clone_status_from_string(std::string_view s) {
  if (s == "not_evaluated")
    return MicroCloneStatus::NotEvaluated;
  if (s == "clone")
    return MicroCloneStatus::Clone;
  if (s == "not_clone")
    return MicroCloneStatus::NotClone;
  if (s == "unevaluable")
    return MicroCloneStatus::Unevaluable;
  throw std::invalid_argument("unknown micro-clone status: " + std::string(s));
}

namespace {

const SatdComment &lookup(const CorpusIndex &corpus, SatdId id) {
  auto it = corpus.find(id);
  if (it == corpus.end())
    throw Error("analyze", "satd_id " + std::to_string(id) + " not in corpus");
  return *it->second;
}

} // namespace

std::vector<CommentPair> make_pairs(const DuplicateGroup &group) {
  std::vector<SatdId> ids(group.member_satd_ids);
  std::sort(ids.begin(), ids.end());
  std::vector<CommentPair> pairs;
  pairs.reserve(ids.size() * (ids.size() - 1) / 2);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      CommentPair p;
      p.group_id = group.group_id;
      p.satd_a = ids[i];
      p.satd_b = ids[j];
      pairs.push_back(p);
    }
  return pairs;
}

GroupFileStats same_file_ratio(const DuplicateGroup &group, const CorpusIndex &corpus) {
  GroupFileStats s;
  s.group_id = group.group_id;
  s.n = group.n();
  for (const auto &p : make_pairs(group)) {
    ++s.pair_count;
    if (lookup(corpus, p.satd_a).file_id == lookup(corpus, p.satd_b).file_id)
      ++s.m;
  }
  s.same_file_ratio =
      s.pair_count ? static_cast<double>(s.m) / static_cast<double>(s.pair_count) : 0.0;
  return s;
}

IntroStatus classify_introduction(const CommentPair &pair, const CorpusIndex &corpus) {
  return lookup(corpus, pair.satd_a).created_in_commit == lookup(corpus, pair.satd_b).created_in_commit
             ? IntroStatus::SameCommit
             : IntroStatus::DifferentCommits;
}

RemovalClassification classify_removal(const CommentPair &pair, const CorpusIndex &corpus) {
  const auto &a = lookup(corpus, pair.satd_a);
  const auto &b = lookup(corpus, pair.satd_b);
  RemovalClassification r;
  if (a.deleted() && b.deleted()) {
    r.delta_days =
        static_cast<double>(std::llabs(*a.deleted_timestamp - *b.deleted_timestamp)) / 86400.0;
    if (*a.deleted_in_commit == *b.deleted_in_commit) {
      r.status = RemovalStatus::Consistent;
      r.detail = RemovalDetail::RemovedSameCommit;
    } else {
      r.status = RemovalStatus::DifferentCommits;
      r.detail = RemovalDetail::DifferentCommits;
    }
  } else if (!a.deleted() && !b.deleted()) {
    r.status = RemovalStatus::Consistent;
    r.detail = RemovalDetail::BothRemain;
  } else {
    r.status = RemovalStatus::OneRemovedOneRemains;
    r.detail = RemovalDetail::OneRemovedOneRemains;
  }
  return r;
}

void classify_pairs(std::vector<CommentPair> &pairs, const CorpusIndex &corpus) {
  for (auto &p : pairs) {
    p.same_file = lookup(corpus, p.satd_a).file_id == lookup(corpus, p.satd_b).file_id;
    p.intro_status = classify_introduction(p, corpus);
    auto r = classify_removal(p, corpus);
    p.removal_status = r.status;
    p.removal_detail = r.detail;
    p.removal_delta_days = r.delta_days;
  }
}

std::optional<DeltaSummary> summarize_deltas(std::vector<double> deltas) {
  if (deltas.empty())
    return std::nullopt;
  std::sort(deltas.begin(), deltas.end());
  DeltaSummary s;
  s.count = deltas.size();
  s.mean = std::accumulate(deltas.begin(), deltas.end(), 0.0) / static_cast<double>(s.count);
  std::size_t mid = s.count / 2;
  s.median = s.count % 2 ? deltas[mid] : (deltas[mid - 1] + deltas[mid]) / 2.0;
  return s;
}

std::optional<DeltaSummary> removal_delta_summary(const std::vector<CommentPair> &pairs) {
  std::vector<double> deltas;
  for (const auto &p : pairs)
    if (p.intro_status == IntroStatus::SameCommit &&
        p.removal_status == RemovalStatus::DifferentCommits && p.removal_delta_days)
      deltas.push_back(*p.removal_delta_days);
  return summarize_deltas(std::move(deltas));
}

void MicroCloneConfig::validate() const {
  if (window < 1)
    throw std::invalid_argument("micro-clone window must be at least 1");
  if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0))
    throw std::invalid_argument("micro-clone threshold must lie in (0, 1]");
}

namespace {

const std::set<std::string, std::less<>> &java_keywords() {
  static const std::set<std::string, std::less<>> k{
      "abstract", "assert",     "boolean",   "break",     "byte",       "case",
      "catch",    "char",       "class",     "const",     "continue",   "default",
      "do",       "double",     "else",      "enum",      "extends",    "final",
      "finally",  "float",      "for",       "goto",      "if",         "implements",
      "import",   "instanceof", "int",       "interface", "long",       "native",
      "new",      "package",    "private",   "protected", "public",     "return",
      "short",    "static",     "strictfp",  "super",     "switch",     "synchronized",
      "this",     "throw",      "throws",    "transient", "try",        "void",
      "volatile", "while",      "var",       "record",    "yield"};
  return k;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool ident_char(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

} // namespace

std::vector<std::string> normalize_window(const std::vector<std::string> &lines) {
  // A window may open inside a block comment: a "*/" seen before any "/*"
  // closes a comment that started above the window.
  bool in_block = false;
  for (const auto &l : lines) {
    auto close = l.find("*/");
    auto open = l.find("/*");
    if (open != std::string::npos && (close == std::string::npos || open < close))
      break;
    if (close != std::string::npos) {
      in_block = true;
      break;
    }
  }

  std::vector<std::string> out;
  for (const auto &line : lines) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      if (in_block) {
        auto close = line.find("*/", i);
        if (close == std::string::npos) {
          i = line.size();
          break;
        }
        in_block = false;
        i = close + 2;
        continue;
      }
      char c = line[i];
      char next = i + 1 < line.size() ? line[i + 1] : '\0';
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '/' && next == '/') {
        break;
      } else if (c == '/' && next == '*') {
        in_block = true;
        i += 2;
      } else if (c == '"' || c == '\'') {
        ++i;
        while (i < line.size() && line[i] != c) {
          if (line[i] == '\\')
            ++i;
          ++i;
        }
        ++i;
        tokens.emplace_back("LIT");
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(next)))) {
        while (i < line.size() && (ident_char(line[i]) || line[i] == '.'))
          ++i;
        tokens.emplace_back("LIT");
      } else if (ident_start(c)) {
        std::size_t j = i;
        while (j < line.size() && ident_char(line[j]))
          ++j;
        std::string word = line.substr(i, j - i);
        if (word == "true" || word == "false" || word == "null")
          tokens.emplace_back("LIT");
        else if (java_keywords().count(word))
          tokens.push_back(std::move(word));
        else
          tokens.emplace_back("ID");
        i = j;
      } else {
        tokens.emplace_back(1, c);
        ++i;
      }
    }
    if (tokens.empty())
      continue;
    std::string joined;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t)
        joined.push_back(' ');
      joined += tokens[t];
    }
    out.push_back(std::move(joined));
  }
  return out;
}

double window_similarity(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  if (a.empty() && b.empty())
    return 0.0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(std::max(a.size(), b.size()));
}

std::vector<std::string> context_window(const std::string &content, std::size_t line,
                                        std::size_t window) {
  auto lines = split_lines(content);
  if (lines.empty() || line == 0)
    return {};
  std::size_t lo = line > window ? line - window : 1;
  std::size_t hi = std::min(lines.size(), line + window);
  if (lo > hi)
    return {};
  return {lines.begin() + static_cast<long>(lo - 1), lines.begin() + static_cast<long>(hi)};
}

MicroCloneResult micro_clone_context(const CommentPair &pair, const CorpusIndex &corpus,
                                     const SnapshotSource &snapshots,
                                     const MicroCloneConfig &config) {
  MicroCloneResult r;
  if (!snapshots)
    return r;
  const auto &a = lookup(corpus, pair.satd_a);
  const auto &b = lookup(corpus, pair.satd_b);
  auto snap_a = snapshots(a.created_in_commit, a.file_path_at_creation);
  auto snap_b = snapshots(b.created_in_commit, b.file_path_at_creation);
  if (!snap_a || !snap_b)
    return r;
  auto wa = normalize_window(context_window(*snap_a, a.created_in_line, config.window));
  auto wb = normalize_window(context_window(*snap_b, b.created_in_line, config.window));
  r.similarity = window_similarity(wa, wb);
  r.status = *r.similarity >= config.similarity_threshold ? MicroCloneStatus::Clone
                                                          : MicroCloneStatus::NotClone;
  return r;
}

namespace {

std::vector<std::string> split_csv_row(const std::string &row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < row.size(); ++i) {
    char c = row[i];
    if (quoted) {
      if (c == '"' && i + 1 < row.size() && row[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  for (auto &f : fields) {
    auto b = f.find_first_not_of(" \t");
    auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

bool parse_line_number(const std::string &s, std::size_t &out) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  try {
    out = std::stoull(s);
  } catch (...) {
    return false;
  }
  return out > 0;
}

std::string normalize_path(std::string p) {
  while (p.starts_with("./"))
    p.erase(0, 2);
  return p;
}

} // namespace

std::vector<ClonePlacement> parse_clone_placements(std::istream &in) {
  std::vector<ClonePlacement> out;
  std::string row;
  std::size_t row_no = 0;
  bool first_data = true;
  while (std::getline(in, row)) {
    ++row_no;
    if (!row.empty() && row.back() == '\r')
      row.pop_back();
    if (row.find_first_not_of(" \t") == std::string::npos)
      continue;
    auto f = split_csv_row(row);
    bool is_first = first_data;
    first_data = false;
    ClonePlacement p;
    bool ok = f.size() == 4 && !f[0].empty() && !f[3].empty() &&
              parse_line_number(f[1], p.start_line) && parse_line_number(f[2], p.end_line);
    if (!ok) {
      std::size_t unused = 0;
      if (is_first && f.size() == 4 && !parse_line_number(f[1], unused) &&
          !parse_line_number(f[2], unused))
        continue; // header
      throw Error("analyze", "malformed clone placement at row " + std::to_string(row_no));
    }
    if (p.start_line > p.end_line)
      throw Error("analyze", "clone placement at row " + std::to_string(row_no) +
                                 " has start_line > end_line");
    p.file_path = normalize_path(f[0]);
    p.clone_class_id = f[3];
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ClonePlacement> ingest_clone_placements(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("analyze", "cannot open clone placements file " + path.string());
  return parse_clone_placements(in);
}

bool group_in_clone(const DuplicateGroup &group, const CorpusIndex &corpus,
                    const std::vector<ClonePlacement> &placements) {
  std::optional<std::set<std::string>> common;
  for (auto id : group.member_satd_ids) {
    const auto &c = lookup(corpus, id);
    auto path = normalize_path(c.file_path_at_creation);
    std::set<std::string> classes;
    for (const auto &p : placements)
      if (p.file_path == path && p.start_line <= c.created_in_line &&
          c.created_in_line <= p.end_line)
        classes.insert(p.clone_class_id);
    if (classes.empty())
      return false;
    if (!common) {
      common = std::move(classes);
    } else {
      std::set<std::string> keep;
      std::set_intersection(common->begin(), common->end(), classes.begin(), classes.end(),
                            std::inserter(keep, keep.begin()));
      common = std::move(keep);
    }
    if (common->empty())
      return false;
  }
  return common.has_value() && !common->empty();
}

} // namespace satd
