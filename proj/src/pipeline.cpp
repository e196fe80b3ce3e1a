#include "satd_radar/pipeline.hpp"

#include "satd_radar/error.hpp"
#include "satd_radar/parallel.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace satd {

namespace fs = std::filesystem;

std::string PipelineConfig::project_name() const {
  if (!project.empty())
    return project;
  std::error_code ec;
  auto canonical = fs::weakly_canonical(repo_path, ec);
  auto name = (ec ? repo_path : canonical).filename().string();
  return name.empty() ? std::string("project") : name;
}

void PipelineConfig::validate() const {
  try {
    cluster.validate();
    micro_clone.validate();
  } catch (const std::invalid_argument &e) {
    throw Error("config", e.what());
  }
  if (output_dir.empty())
    throw Error("config", "output directory not set");
}

BundlePaths::BundlePaths(const fs::path &dir)
    : corpus(dir / "comments.jsonl"), groups(dir / "groups.json"), pairs(dir / "pairs.json"),
      report(dir / "report.json"), report_markdown(dir / "report.md"),
      warnings(dir / "warnings.txt") {}

namespace {

bool matches_extension(const FileLineage &l, const std::string &ext) {
  if (ext.empty())
    return true;
  for (const auto &s : l.segments)
    if (s.path.size() >= ext.size() && s.path.compare(s.path.size() - ext.size(), ext.size(), ext) == 0)
      return true;
  return false;
}

void ensure_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error("config", "output directory not writable: " + dir.string());
}

std::vector<std::string> read_warnings(const fs::path &path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty())
      out.push_back(line);
  return out;
}

} // namespace

MineResult mine_repository(const PipelineConfig &config) {
  GitRepository repo(config.repo_path);
  MineResult result;
  result.chain = extract_main_chain(repo, config.branch);
  auto all = build_file_lineages(repo, result.chain);
  for (auto &l : all)
    if (matches_extension(l, config.extension))
      result.lineages.push_back(std::move(l));

  const std::size_t n = result.lineages.size();
  result.streams.resize(n);
  std::vector<std::vector<SatdComment>> per_lineage(n);
  parallel_for(n, [&](std::size_t i) {
    result.streams[i] = ordered_hunks(repo, result.lineages[i], result.chain);
    if (!result.streams[i].warning)
      per_lineage[i] = scan_for_satd(result.lineages[i], result.streams[i].hunks, result.chain,
                                     config.auto_generated);
  });

  const std::string project = config.project_name();
  for (std::size_t i = 0; i < n; ++i) {
    if (result.streams[i].warning)
      result.warnings.push_back(*result.streams[i].warning);
    for (auto &r : per_lineage[i]) {
      r.project = project;
      result.corpus.push_back(std::move(r));
    }
  }
  assign_satd_ids(result.corpus);
  return result;
}

ClusteringResult cluster_corpus(const PipelineConfig &config,
                                const std::vector<SatdComment> &corpus) {
  config.cluster.validate();
  std::vector<SatdId> ids;
  std::map<SatdId, std::string> texts;
  for (const auto &c : corpus)
    if (c.filter == FilterOutcome::Kept) {
      ids.push_back(c.satd_id);
      texts[c.satd_id] = c.clean_text;
    }

  ClusteringResult result;
  const bool lexical = config.no_embeddings || !config.embeddings_path;
  result.embedding_model = lexical ? kLexicalModel : std::string();
  if (ids.size() < 2) {
    result.noise = ids;
    if (!lexical && !ids.empty())
      load_embeddings(*config.embeddings_path, ids, &result.embedding_model);
    return result;
  }

  SimilarityMatrix matrix;
  if (lexical) {
    matrix = similarity_matrix(lexical_fallback_embed(texts));
  } else {
    matrix = similarity_matrix(load_embeddings(*config.embeddings_path, ids, &result.embedding_model));
  }
  auto retained = prefilter(matrix, config.cluster.sim_prefilter);
  auto clusters = dbscan(matrix, retained, config.cluster);
  result.groups = std::move(clusters.groups);

  std::set<SatdId> grouped;
  for (const auto &g : result.groups)
    grouped.insert(g.member_satd_ids.begin(), g.member_satd_ids.end());
  for (auto id : ids)
    if (!grouped.count(id))
      result.noise.push_back(id);
  return result;
}

PairsDocument analyze_groups(const PipelineConfig &config, const std::vector<SatdComment> &corpus,
                             const ClusteringResult &clusters, const SnapshotSource &snapshots) {
  config.micro_clone.validate();
  auto index = index_corpus(corpus);
  PairsDocument doc;
  for (const auto &g : clusters.groups) {
    doc.group_stats.push_back(same_file_ratio(g, index));
    auto pairs = make_pairs(g);
    doc.pairs.insert(doc.pairs.end(), pairs.begin(), pairs.end());
  }
  classify_pairs(doc.pairs, index);

  if (snapshots) {
    // Snapshot reads are cached per (commit, path); groups share files often.
    std::map<std::pair<std::string, std::string>, std::optional<std::string>> cache;
    SnapshotSource cached = [&](const std::string &commit, const std::string &path) {
      auto key = std::make_pair(commit, path);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, snapshots(commit, path)).first;
      return it->second;
    };
    for (auto &p : doc.pairs) {
      auto r = micro_clone_context(p, index, cached, config.micro_clone);
      p.micro_clone = r.status;
      p.micro_clone_similarity = r.similarity;
    }
  }

  if (config.clone_placements_path) {
    auto placements = ingest_clone_placements(*config.clone_placements_path);
    for (const auto &g : clusters.groups)
      doc.group_in_clone[g.group_id] = group_in_clone(g, index, placements);
  }
  return doc;
}

ProjectReport build_report(const PipelineConfig &config, const std::vector<SatdComment> &corpus,
                           const ClusteringResult &clusters, const PairsDocument &pairs,
                           const std::vector<std::string> &warnings) {
  auto index = index_corpus(corpus);
  ProjectReport r;
  r.project = config.project_name();
  r.embedding_model = clusters.embedding_model;
  r.cluster = config.cluster;
  r.micro_clone_config = config.micro_clone;
  r.corpus = emit_corpus_stats(corpus, clusters.groups);
  r.group_stats = pairs.group_stats;
  r.pairs = emit_pair_distribution(pairs.pairs, index);
  if (r.pairs.by_project.empty())
    r.pairs.by_project[r.project] = PairCounts{};
  r.removal_delta = removal_delta_summary(pairs.pairs);

  bool evaluated = std::any_of(pairs.pairs.begin(), pairs.pairs.end(), [](const CommentPair &p) {
    return p.micro_clone != MicroCloneStatus::NotEvaluated;
  });
  if (evaluated || pairs.pairs.empty()) {
    MicroCloneSummary m;
    std::map<std::uint64_t, bool> all_clone;
    for (const auto &p : pairs.pairs) {
      ++m.pairs_evaluated;
      if (p.micro_clone == MicroCloneStatus::Clone)
        ++m.clone;
      else if (p.micro_clone == MicroCloneStatus::NotClone)
        ++m.not_clone;
      else
        ++m.unevaluable;
      auto [it, fresh] = all_clone.emplace(p.group_id, true);
      it->second = it->second && p.micro_clone == MicroCloneStatus::Clone;
    }
    for (const auto &[gid, yes] : all_clone)
      m.groups_all_clone += yes;
    r.micro_clone = m;
  }

  if (config.clone_placements_path) {
    CloneSummary c;
    c.group_count = clusters.groups.size();
    for (const auto &[gid, in] : pairs.group_in_clone)
      if (in) {
        ++c.groups_in_clone;
        c.group_ids_in_clone.push_back(gid);
      }
    r.block_clones = c;
  }
  r.warnings = warnings;
  self_check(r);
  return r;
}

void run_mine_stage(const PipelineConfig &config) {
  config.validate();
  ensure_dir(config.output_dir);
  BundlePaths paths(config.output_dir);
  auto mined = mine_repository(config);
  write_corpus(paths.corpus, mined.corpus);
  std::string w;
  for (const auto &line : mined.warnings)
    w += line + "\n";
  write_text_file(paths.warnings, w);
  if (config.dump_hunks_path)
    dump_hunks(*config.dump_hunks_path, mined.lineages, mined.streams);
}

void run_cluster_stage(const PipelineConfig &config) {
  config.validate();
  BundlePaths paths(config.output_dir);
  auto corpus = read_corpus(paths.corpus);
  auto clusters = cluster_corpus(config, corpus);
  write_groups(paths.groups, clusters, index_corpus(corpus));
}

void run_analyze_stage(const PipelineConfig &config) {
  config.validate();
  BundlePaths paths(config.output_dir);
  auto corpus = read_corpus(paths.corpus);
  auto clusters = read_groups(paths.groups);
  std::unique_ptr<GitRepository> repo;
  SnapshotSource snapshots;
  if (!config.repo_path.empty()) {
    repo = std::make_unique<GitRepository>(config.repo_path);
    snapshots = [&repo](const std::string &commit, const std::string &path) {
      return repo->read_file_at(commit, path);
    };
  }
  write_pairs(paths.pairs, analyze_groups(config, corpus, clusters, snapshots));
}

ProjectReport run_report_stage(const PipelineConfig &config) {
  config.validate();
  BundlePaths paths(config.output_dir);
  auto corpus = read_corpus(paths.corpus);
  auto clusters = read_groups(paths.groups);
  auto pairs = read_pairs(paths.pairs);
  auto report = build_report(config, corpus, clusters, pairs, read_warnings(paths.warnings));
  write_report(paths.report, report);
  write_text_file(paths.report_markdown, render_markdown(report));
  return report;
}

namespace {

template <typename F> bool guarded(std::ostream &err, F &&body) {
  try {
    body();
    return true;
  } catch (const Error &e) {
    err << "error [" << e.stage() << "]: " << e.what() << "\n";
  } catch (const std::exception &e) {
    err << "error [internal]: " << e.what() << "\n";
  }
  return false;
}

} // namespace

int run_pipeline(const PipelineConfig &config, std::ostream &err) {
  bool ok = guarded(err, [&] {
    run_mine_stage(config);
    run_cluster_stage(config);
    run_analyze_stage(config);
    run_report_stage(config);
  });
  return ok ? 0 : 1;
}

std::vector<ManifestEntry> read_manifest(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("config", "cannot open manifest " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    ManifestEntry e;
    std::string repo;
    if (!(fields >> e.project))
      continue;
    if (!(fields >> repo))
      throw Error("config", "manifest row " + std::to_string(row) + " lacks a repository path");
    fields >> e.branch;
    e.repo_path = fs::path(repo).is_absolute() ? fs::path(repo) : path.parent_path() / repo;
    out.push_back(std::move(e));
  }
  return out;
}

int run_manifest(const PipelineConfig &base, const std::vector<ManifestEntry> &entries,
                 const std::string &focus, std::ostream &err) {
  bool ok = guarded(err, [&] {
    base.validate();
    ensure_dir(base.output_dir);
    MultiProjectReport multi;
    for (const auto &e : entries) {
      PipelineConfig c = base;
      c.project = e.project;
      c.repo_path = e.repo_path;
      if (!e.branch.empty())
        c.branch = e.branch;
      c.output_dir = base.output_dir / e.project;
      c.dump_hunks_path.reset();
      run_mine_stage(c);
      run_cluster_stage(c);
      run_analyze_stage(c);
      multi.projects.push_back(run_report_stage(c));
    }
    for (const auto &p : multi.projects) {
      const auto &c = p.pairs.overall;
      for (std::size_t row = 0; row < 2; ++row) {
        for (std::size_t col = 0; col < 3; ++col)
          multi.combined.overall.cells[row][col] += c.cells[row][col];
        for (std::size_t col = 0; col < 4; ++col)
          multi.combined.overall.detail[row][col] += c.detail[row][col];
        multi.combined.overall.intro_totals[row] += c.intro_totals[row];
      }
      multi.combined.overall.total += c.total;
      multi.combined.by_project[p.project] = c;
    }
    multi.comparisons = compare_same_file_ratios(multi.projects, focus);
    self_check(multi);
    BundlePaths paths(base.output_dir);
    write_report(paths.report, multi);
    write_text_file(paths.report_markdown, render_markdown(multi));
  });
  return ok ? 0 : 1;
}

} // namespace satd
