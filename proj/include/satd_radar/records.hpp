#pragma once

#include "satd_radar/clustering.hpp"
#include "satd_radar/history.hpp"
#include "satd_radar/lifecycle.hpp"
#include "satd_radar/pairs.hpp"
#include "satd_radar/report.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace satd {

// JSON mappings for every record type written to disk.
void to_json(nlohmann::json &j, const SatdComment &c);
void from_json(const nlohmann::json &j, SatdComment &c);
void to_json(nlohmann::json &j, const DuplicateGroup &g);
void from_json(const nlohmann::json &j, DuplicateGroup &g);
void to_json(nlohmann::json &j, const CommentPair &p);
void from_json(const nlohmann::json &j, CommentPair &p);
void to_json(nlohmann::json &j, const GroupFileStats &s);
void from_json(const nlohmann::json &j, GroupFileStats &s);
void to_json(nlohmann::json &j, const ProjectReport &r);
void from_json(const nlohmann::json &j, ProjectReport &r);
void to_json(nlohmann::json &j, const MultiProjectReport &r);
void from_json(const nlohmann::json &j, MultiProjectReport &r);

// Comments corpus: one JSON object per line.
void write_corpus(const std::filesystem::path &path, const std::vector<SatdComment> &corpus);
std::vector<SatdComment> read_corpus(const std::filesystem::path &path);

// Embeddings: one {satd_id, model, vector} object per line.
void write_embeddings(const std::filesystem::path &path, const std::string &model,
                      const std::map<SatdId, DenseVector> &vectors);

// Groups document. Each group also carries a dossier of its members (text,
// commits, paths) for manual review; readers ignore the dossier.
void write_groups(const std::filesystem::path &path, const ClusteringResult &clusters,
                  const CorpusIndex &corpus);
ClusteringResult read_groups(const std::filesystem::path &path);

struct PairsDocument {
  std::vector<CommentPair> pairs;
  std::vector<GroupFileStats> group_stats;
  // group_id -> all members in one clone class (present with placements)
  std::map<std::uint64_t, bool> group_in_clone;

  bool operator==(const PairsDocument &) const = default;
};

void write_pairs(const std::filesystem::path &path, const PairsDocument &doc);
PairsDocument read_pairs(const std::filesystem::path &path);

void write_report(const std::filesystem::path &path, const ProjectReport &report);
ProjectReport read_report(const std::filesystem::path &path);
void write_report(const std::filesystem::path &path, const MultiProjectReport &report);
MultiProjectReport read_multi_report(const std::filesystem::path &path);

// Debug dump of lineages and hunks, one record per line.
void dump_hunks(const std::filesystem::path &path, const std::vector<FileLineage> &lineages,
                const std::vector<HunkStream> &streams);

// Writes text with '\n' line endings, replacing the file atomically.
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace satd
