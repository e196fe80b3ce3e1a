#include "satd_radar/report.hpp"

#include "satd_radar/error.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace satd {

CorpusStats emit_corpus_stats(const std::vector<SatdComment> &corpus,
                              const std::vector<DuplicateGroup> &groups) {
  CorpusStats s;
  s.total_satd = corpus.size();
  for (const auto &c : corpus) {
    if (c.filter == FilterOutcome::AutoGenerated)
      ++s.removed_filter1;
    else if (c.filter == FilterOutcome::Trivial)
      ++s.removed_filter2;
  }
  s.after_filtering = s.total_satd - s.removed_filter1 - s.removed_filter2;
  s.group_count = groups.size();
  for (const auto &g : groups)
    s.duplicate_satd_count += g.n();
  if (s.total_satd)
    s.duplicate_ratio =
        static_cast<double>(s.duplicate_satd_count) / static_cast<double>(s.total_satd);
  if (s.after_filtering)
    s.duplicate_ratio_after_filtering =
        static_cast<double>(s.duplicate_satd_count) / static_cast<double>(s.after_filtering);
  return s;
}

void PairCounts::add(const CommentPair &pair) {
  std::size_t row = pair.intro_status == IntroStatus::SameCommit ? 0 : 1;
  cells[row][static_cast<std::size_t>(pair.removal_status)] += 1;
  detail[row][static_cast<std::size_t>(pair.removal_detail)] += 1;
  intro_totals[row] += 1;
  total += 1;
}

PairDistribution emit_pair_distribution(const std::vector<CommentPair> &pairs,
                                        const CorpusIndex &corpus) {
  PairDistribution d;
  for (const auto &p : pairs) {
    d.overall.add(p);
    auto it = corpus.find(p.satd_a);
    std::string project = it == corpus.end() ? std::string() : it->second->project;
    d.by_project[project].add(p);
  }
  return d;
}

std::vector<CrossProjectComparison> compare_same_file_ratios(
    const std::vector<ProjectReport> &projects, const std::string &focus) {
  auto ratios = [](const ProjectReport &r) {
    std::vector<double> out;
    for (const auto &g : r.group_stats)
      out.push_back(g.same_file_ratio);
    return out;
  };
  std::vector<CrossProjectComparison> out;
  for (std::size_t i = 0; i < projects.size(); ++i)
    for (std::size_t j = i + 1; j < projects.size(); ++j) {
      const ProjectReport *a = &projects[i];
      const ProjectReport *b = &projects[j];
      if (!focus.empty()) {
        if (b->project == focus)
          std::swap(a, b);
        if (a->project != focus)
          continue;
      }
      auto ra = ratios(*a), rb = ratios(*b);
      if (ra.empty() || rb.empty())
        continue;
      auto mw = mann_whitney_u(ra, rb);
      out.push_back({a->project, b->project, ra.size(), rb.size(), mw.u_a, mw.u_b, mw.p_value,
                     mw.exact});
    }
  return out;
}

bool filter_counts_consistent(std::size_t total, std::size_t filter1, std::size_t filter2,
                       std::size_t after_filtering) {
  return filter1 + filter2 <= total && after_filtering == total - filter1 - filter2;
}

bool pair_row_consistent(std::size_t intro_total, std::size_t consistent,
                           std::size_t different_commits, std::size_t one_removed) {
  return intro_total == consistent + different_commits + one_removed;
}

namespace {

[[noreturn]] void fail(const std::string &project, const std::string &what) {
  throw Error("report", "self-check failed for project '" + project + "': " + what);
}

void check_counts(const std::string &project, const PairCounts &c, const std::string &label) {
  std::size_t sum = 0;
  for (std::size_t row = 0; row < 2; ++row) {
    const auto &cells = c.cells[row];
    if (!pair_row_consistent(c.intro_totals[row], cells[0], cells[1], cells[2]))
      fail(project, label + " removal statuses do not sum to intro total in row " +
                        std::to_string(row));
    const auto &d = c.detail[row];
    if (d[0] + d[1] != cells[0] || d[2] != cells[1] || d[3] != cells[2])
      fail(project, label + " four-way breakdown disagrees with three-way counts");
    sum += c.intro_totals[row];
  }
  if (sum != c.total)
    fail(project, label + " intro totals do not sum to the pair total");
}

} // namespace

void self_check(const ProjectReport &r) {
  const auto &s = r.corpus;
  if (!filter_counts_consistent(s.total_satd, s.removed_filter1, s.removed_filter2, s.after_filtering))
    fail(r.project, "after_filtering != total - filter1 - filter2");
  if (s.duplicate_satd_count > s.after_filtering)
    fail(r.project, "more duplicates than filtered comments");
  if (s.group_count != r.group_stats.size())
    fail(r.project, "group count disagrees with group statistics");
  if (s.total_satd == 0 ? s.duplicate_ratio.has_value()
                        : !s.duplicate_ratio ||
                              std::abs(*s.duplicate_ratio -
                                       static_cast<double>(s.duplicate_satd_count) /
                                           static_cast<double>(s.total_satd)) > 1e-12)
    fail(r.project, "duplicate ratio is not duplicates / total");

  std::size_t members = 0, pair_total = 0;
  for (const auto &g : r.group_stats) {
    if (g.n < 2)
      fail(r.project, "group " + std::to_string(g.group_id) + " has fewer than 2 members");
    if (g.pair_count != g.n * (g.n - 1) / 2)
      fail(r.project, "group " + std::to_string(g.group_id) + " pair count != n(n-1)/2");
    if (g.m > g.pair_count)
      fail(r.project, "group " + std::to_string(g.group_id) + " has m > pair count");
    if (g.same_file_ratio < 0.0 || g.same_file_ratio > 1.0)
      fail(r.project, "group " + std::to_string(g.group_id) + " ratio outside [0, 1]");
    members += g.n;
    pair_total += g.pair_count;
  }
  if (members != s.duplicate_satd_count)
    fail(r.project, "group sizes do not sum to the duplicate count");
  if (pair_total != r.pairs.overall.total)
    fail(r.project, "pair distribution total != sum of n(n-1)/2");

  check_counts(r.project, r.pairs.overall, "overall");
  std::size_t project_total = 0;
  for (const auto &[name, c] : r.pairs.by_project) {
    check_counts(r.project, c, "project " + name);
    project_total += c.total;
  }
  if (project_total != r.pairs.overall.total)
    fail(r.project, "per-project pair totals do not sum to the overall total");

  if (r.removal_delta) {
    if (r.removal_delta->count != r.pairs.overall.cells[0][1])
      fail(r.project, "removal delta summary does not cover the same-commit/different-commit cell");
  } else if (r.pairs.overall.cells[0][1] != 0) {
    fail(r.project, "removal delta summary missing");
  }

  if (r.micro_clone) {
    const auto &m = *r.micro_clone;
    if (m.clone + m.not_clone + m.unevaluable != m.pairs_evaluated ||
        m.pairs_evaluated != r.pairs.overall.total)
      fail(r.project, "micro-clone counts do not cover every pair");
  }
  if (r.block_clones && r.block_clones->groups_in_clone != r.block_clones->group_ids_in_clone.size())
    fail(r.project, "clone group count disagrees with listed groups");
}

void self_check(const MultiProjectReport &r) {
  PairCounts sum;
  for (const auto &p : r.projects) {
    self_check(p);
    for (std::size_t row = 0; row < 2; ++row) {
      for (std::size_t col = 0; col < 3; ++col)
        sum.cells[row][col] += p.pairs.overall.cells[row][col];
      for (std::size_t col = 0; col < 4; ++col)
        sum.detail[row][col] += p.pairs.overall.detail[row][col];
      sum.intro_totals[row] += p.pairs.overall.intro_totals[row];
    }
    sum.total += p.pairs.overall.total;
  }
  if (!(sum == r.combined.overall))
    fail("<combined>", "combined distribution is not the sum of project distributions");
  check_counts("<combined>", r.combined.overall, "combined");
}

namespace {

std::string pct(std::optional<double> v) {
  if (!v)
    return "n/a";
  std::ostringstream o;
  o << std::fixed << std::setprecision(1) << *v * 100.0 << "%";
  return o.str();
}

void corpus_row(std::ostringstream &o, const ProjectReport &r) {
  const auto &s = r.corpus;
  o << "| " << r.project << " | " << s.total_satd << " | " << s.removed_filter1 << " | "
    << s.removed_filter2 << " | " << s.after_filtering << " | " << s.duplicate_satd_count
    << " | " << s.group_count << " | " << pct(s.duplicate_ratio) << " |\n";
}

void pair_table(std::ostringstream &o, const PairCounts &c, const std::string &title) {
  o << "\n### " << title << "\n\n";
  o << "| Introduction | #pairs | Removed same commit or both remain | Removed in different "
       "commits | One removed, other remains |\n";
  o << "|---|---|---|---|---|\n";
  const char *rows[2] = {"Same commit", "Different commits"};
  for (std::size_t row = 0; row < 2; ++row)
    o << "| " << rows[row] << " | " << c.intro_totals[row] << " | " << c.cells[row][0] << " ("
      << c.detail[row][0] << " removed together, " << c.detail[row][1] << " both remain) | "
      << c.cells[row][1] << " | " << c.cells[row][2] << " |\n";
}

void project_details(std::ostringstream &o, const ProjectReport &r) {
  pair_table(o, r.pairs.overall, "Duplicate pairs by introduction and removal status: " + r.project);
  o << "\n";
  if (r.removal_delta) {
    o << "Removal-time difference (same-commit introduction, different-commit removal): mean "
      << std::fixed << std::setprecision(2) << r.removal_delta->mean << " days, median "
      << r.removal_delta->median << " days over " << r.removal_delta->count << " pairs.\n";
  } else {
    o << "Removal-time difference: no pairs introduced together and removed apart.\n";
  }
  if (r.micro_clone)
    o << "Micro-clone context (heuristic): " << r.micro_clone->clone << " of "
      << r.micro_clone->pairs_evaluated << " pairs, " << r.micro_clone->unevaluable
      << " unevaluable; " << r.micro_clone->groups_all_clone << " groups entirely in micro-clones.\n";
  if (r.block_clones)
    o << "Block clones: " << r.block_clones->groups_in_clone << " of "
      << r.block_clones->group_count << " groups lie in one clone class.\n";
  for (const auto &w : r.warnings)
    o << "Warning: " << w << "\n";
}

const char *kCorpusHeader =
    "| Project | # SATD | # Removed by filter 1 | # Removed by filter 2 | # After filtering | "
    "# Dup. SATD | # Groups | Dup. ratio |\n|---|---|---|---|---|---|---|---|\n";

} // namespace

std::string render_markdown(const ProjectReport &r) {
  std::ostringstream o;
  o << "# SATD duplicate report: " << r.project << "\n\n";
  o << "Embeddings: " << r.embedding_model << "; prefilter " << r.cluster.sim_prefilter
    << ", eps " << r.cluster.eps << ", min_samples " << r.cluster.min_samples << "\n\n";
  o << kCorpusHeader;
  corpus_row(o, r);
  project_details(o, r);
  return o.str();
}

std::string render_markdown(const MultiProjectReport &r) {
  std::ostringstream o;
  o << "# SATD duplicate report\n\n" << kCorpusHeader;
  for (const auto &p : r.projects)
    corpus_row(o, p);
  pair_table(o, r.combined.overall, "All projects");
  for (const auto &p : r.projects) {
    o << "\n## " << p.project << "\n";
    project_details(o, p);
  }
  if (!r.comparisons.empty()) {
    o << "\n## Same-file ratio comparisons (Mann-Whitney, two-sided, uncorrected)\n\n";
    o << "| A | B | groups A | groups B | U_A | p |\n|---|---|---|---|---|---|\n";
    for (const auto &c : r.comparisons)
      o << "| " << c.project_a << " | " << c.project_b << " | " << c.groups_a << " | "
        << c.groups_b << " | " << c.u_a << " | " << std::setprecision(4) << c.p_value << " |\n";
  }
  return o.str();
}

} // namespace satd
