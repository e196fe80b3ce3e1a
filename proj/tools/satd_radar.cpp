#include "satd_radar/error.hpp"
#include "satd_radar/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

void add_common(CLI::App *cmd, satd::PipelineConfig &config) {
  cmd->add_option("--out", config.output_dir, "Output directory for the bundle")->required();
  cmd->add_option("--project", config.project, "Project name (default: repository directory)");
}

void add_repo(CLI::App *cmd, satd::PipelineConfig &config, bool required) {
  auto *opt = cmd->add_option("--repo", config.repo_path, "Path to the git repository");
  if (required)
    opt->required();
  cmd->add_option("--branch", config.branch, "Main branch (default: master, then main)");
}

void add_mine(CLI::App *cmd, satd::PipelineConfig &config, std::string &dump) {
  cmd->add_option("--ext", config.extension, "Source file extension to mine");
  cmd->add_option("--dump-hunks", dump, "Write per-lineage hunk streams to this file");
}

void add_cluster(CLI::App *cmd, satd::PipelineConfig &config, std::string &embeddings) {
  cmd->add_option("--embeddings", embeddings, "Embeddings file (one JSON object per line)");
  cmd->add_flag("--no-embeddings", config.no_embeddings, "Use the lexical fallback model");
  cmd->add_option("--sim-threshold", config.cluster.sim_prefilter, "Prefilter cosine threshold");
  cmd->add_option("--eps", config.cluster.eps, "DBSCAN radius in cosine distance");
  cmd->add_option("--min-samples", config.cluster.min_samples, "DBSCAN core point size");
}

void add_analyze(CLI::App *cmd, satd::PipelineConfig &config, std::string &placements) {
  cmd->add_option("--clone-placements", placements, "Clone placements CSV");
  cmd->add_option("--window", config.micro_clone.window, "Context lines either side");
  cmd->add_option("--clone-threshold", config.micro_clone.similarity_threshold,
                  "Micro-clone similarity threshold");
}

int guarded(const std::function<void()> &body) {
  try {
    body();
    return 0;
  } catch (const satd::Error &e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
  } catch (const std::exception &e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
  }
  return 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Mine and analyze duplicate self-admitted technical debt in a git repository"};
  app.require_subcommand(1);
  app.fallthrough();

  satd::PipelineConfig config;
  std::string dump, embeddings, placements, manifest, focus;
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Accepted for reproducibility; every stage is deterministic");

  auto *mine = app.add_subcommand("mine", "Extract the SATD comments corpus");
  add_common(mine, config);
  add_repo(mine, config, true);
  add_mine(mine, config, dump);

  auto *cluster = app.add_subcommand("cluster", "Group duplicate SATD comments");
  add_common(cluster, config);
  add_cluster(cluster, config, embeddings);

  auto *analyze = app.add_subcommand("analyze", "Classify comment pairs of each group");
  add_common(analyze, config);
  add_repo(analyze, config, false);
  add_analyze(analyze, config, placements);

  auto *report = app.add_subcommand("report", "Write report.json and report.md");
  add_common(report, config);

  auto *all = app.add_subcommand("all", "Run every stage");
  all->add_option("--out", config.output_dir, "Output directory for the bundle")->required();
  all->add_option("--project", config.project, "Project name (default: repository directory)");
  auto *repo_opt = all->add_option("--repo", config.repo_path, "Path to the git repository");
  all->add_option("--branch", config.branch, "Main branch (default: master, then main)");
  auto *manifest_opt =
      all->add_option("--manifest", manifest, "Project list: \"name repo_path [branch]\" per line");
  all->add_option("--focus", focus, "With --manifest, compare only this project to the others");
  repo_opt->excludes(manifest_opt);
  add_mine(all, config, dump);
  add_cluster(all, config, embeddings);
  add_analyze(all, config, placements);

  CLI11_PARSE(app, argc, argv);

  if (!dump.empty())
    config.dump_hunks_path = dump;
  if (!embeddings.empty())
    config.embeddings_path = embeddings;
  if (!placements.empty())
    config.clone_placements_path = placements;

  if (*mine)
    return guarded([&] { satd::run_mine_stage(config); });
  if (*cluster)
    return guarded([&] { satd::run_cluster_stage(config); });
  if (*analyze)
    return guarded([&] { satd::run_analyze_stage(config); });
  if (*report)
    return guarded([&] { satd::run_report_stage(config); });

  if (!manifest.empty()) {
    std::vector<satd::ManifestEntry> entries;
    if (int rc = guarded([&] { entries = satd::read_manifest(manifest); }))
      return rc;
    return satd::run_manifest(config, entries, focus, std::cerr);
  }
  if (config.repo_path.empty()) {
    std::cerr << "error [config]: --repo or --manifest is required\n";
    return 2;
  }
  return satd::run_pipeline(config, std::cerr);
}
