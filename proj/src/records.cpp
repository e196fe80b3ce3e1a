#include "satd_radar/records.hpp"

#include "satd_radar/error.hpp"

#include <fstream>
#include <sstream>

namespace satd {

using nlohmann::json;

namespace {

template <typename T> json opt(const std::optional<T> &v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T> std::optional<T> get_opt(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return j.at(key).get<T>();
}

json read_json_file(const std::filesystem::path &path, const std::string &stage) {
  std::ifstream in(path);
  if (!in)
    throw Error(stage, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const std::exception &e) {
    throw Error(stage, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

} // namespace

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("report", "cannot write " + path.string());
    out << text;
    if (!out)
      throw Error("report", "write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw Error("report", "cannot move " + tmp.string() + " into place: " + ec.message());
}

void to_json(json &j, const SatdComment &c) {
  j = json{{"satd_id", c.satd_id},
           {"project", c.project},
           {"file_id", c.file_id},
           {"file_path_at_creation", c.file_path_at_creation},
           {"created_in_commit", c.created_in_commit},
           {"created_in_line", c.created_in_line},
           {"created_timestamp", c.created_timestamp},
           {"current_line", opt(c.current_line)},
           {"deleted_in_commit", opt(c.deleted_in_commit)},
           {"deleted_timestamp", opt(c.deleted_timestamp)},
           {"raw_text", c.raw_text},
           {"clean_text", c.clean_text},
           {"tags_found", c.tags_found},
           {"filter", std::string(to_string(c.filter))}};
}

void from_json(const json &j, SatdComment &c) {
  c = SatdComment{};
  j.at("satd_id").get_to(c.satd_id);
  c.project = j.value("project", std::string());
  j.at("file_id").get_to(c.file_id);
  j.at("file_path_at_creation").get_to(c.file_path_at_creation);
  j.at("created_in_commit").get_to(c.created_in_commit);
  j.at("created_in_line").get_to(c.created_in_line);
  j.at("created_timestamp").get_to(c.created_timestamp);
  c.current_line = get_opt<std::size_t>(j, "current_line");
  c.deleted_in_commit = get_opt<std::string>(j, "deleted_in_commit");
  c.deleted_timestamp = get_opt<long long>(j, "deleted_timestamp");
  j.at("raw_text").get_to(c.raw_text);
  j.at("clean_text").get_to(c.clean_text);
  j.at("tags_found").get_to(c.tags_found);
  c.filter = filter_outcome_from_string(j.value("filter", std::string("kept")));
}

void to_json(json &j, const DuplicateGroup &g) {
  j = json{{"group_id", g.group_id}, {"n", g.n()}, {"member_satd_ids", g.member_satd_ids}};
}

void from_json(const json &j, DuplicateGroup &g) {
  j.at("group_id").get_to(g.group_id);
  j.at("member_satd_ids").get_to(g.member_satd_ids);
  if (j.contains("n") && j.at("n").get<std::size_t>() != g.member_satd_ids.size())
    throw std::invalid_argument("group " + std::to_string(g.group_id) + ": n disagrees with members");
}

void to_json(json &j, const CommentPair &p) {
  j = json{{"group_id", p.group_id},
           {"satd_a", p.satd_a},
           {"satd_b", p.satd_b},
           {"same_file", p.same_file},
           {"intro_status", std::string(to_string(p.intro_status))},
           {"removal_status", std::string(to_string(p.removal_status))},
           {"removal_detail", std::string(to_string(p.removal_detail))},
           {"removal_delta_days", opt(p.removal_delta_days)},
           {"micro_clone_heuristic", std::string(to_string(p.micro_clone))},
           {"micro_clone_similarity", opt(p.micro_clone_similarity)}};
}

void from_json(const json &j, CommentPair &p) {
  j.at("group_id").get_to(p.group_id);
  j.at("satd_a").get_to(p.satd_a);
  j.at("satd_b").get_to(p.satd_b);
  j.at("same_file").get_to(p.same_file);
  p.intro_status = intro_status_from_string(j.at("intro_status").get<std::string>());
  p.removal_status = removal_status_from_string(j.at("removal_status").get<std::string>());
  p.removal_detail = removal_detail_from_string(j.at("removal_detail").get<std::string>());
  p.removal_delta_days = get_opt<double>(j, "removal_delta_days");
  p.micro_clone = micro_clone_status_from_string(
      j.value("micro_clone_heuristic", std::string("not_evaluated")));
  p.micro_clone_similarity = get_opt<double>(j, "micro_clone_similarity");
}

void to_json(json &j, const GroupFileStats &s) {
  j = json{{"group_id", s.group_id},
           {"n", s.n},
           {"pair_count", s.pair_count},
           {"m", s.m},
           {"same_file_ratio", s.same_file_ratio}};
}

void from_json(const json &j, GroupFileStats &s) {
  j.at("group_id").get_to(s.group_id);
  j.at("n").get_to(s.n);
  j.at("pair_count").get_to(s.pair_count);
  j.at("m").get_to(s.m);
  j.at("same_file_ratio").get_to(s.same_file_ratio);
}

namespace {

json counts_json(const PairCounts &c) {
  json rows = json::array();
  const char *names[2] = {"same_commit", "different_commits"};
  for (std::size_t r = 0; r < 2; ++r)
    rows.push_back({{"intro_status", names[r]},
                    {"pairs", c.intro_totals[r]},
                    {"consistent", c.cells[r][0]},
                    {"different_commits", c.cells[r][1]},
                    {"one_removed_one_remains", c.cells[r][2]},
                    {"removed_same_commit", c.detail[r][0]},
                    {"both_remain", c.detail[r][1]}});
  return json{{"total", c.total}, {"rows", rows}};
}

PairCounts counts_from_json(const json &j) {
  PairCounts c;
  j.at("total").get_to(c.total);
  const auto &rows = j.at("rows");
  if (rows.size() != 2)
    throw std::invalid_argument("pair distribution needs two rows");
  for (std::size_t r = 0; r < 2; ++r) {
    const auto &row = rows.at(r);
    row.at("pairs").get_to(c.intro_totals[r]);
    row.at("consistent").get_to(c.cells[r][0]);
    row.at("different_commits").get_to(c.cells[r][1]);
    row.at("one_removed_one_remains").get_to(c.cells[r][2]);
    row.at("removed_same_commit").get_to(c.detail[r][0]);
    row.at("both_remain").get_to(c.detail[r][1]);
    c.detail[r][2] = c.cells[r][1];
    c.detail[r][3] = c.cells[r][2];
  }
  return c;
}

json distribution_json(const PairDistribution &d) {
  json by = json::object();
  for (const auto &[name, c] : d.by_project)
    by[name] = counts_json(c);
  return json{{"overall", counts_json(d.overall)}, {"by_project", by}};
}

PairDistribution distribution_from_json(const json &j) {
  PairDistribution d;
  d.overall = counts_from_json(j.at("overall"));
  for (const auto &[name, c] : j.at("by_project").items())
    d.by_project[name] = counts_from_json(c);
  return d;
}

} // namespace

void to_json(json &j, const ProjectReport &r) {
  const auto &s = r.corpus;
  j = json{
      {"project", r.project},
      {"embedding_model", r.embedding_model},
      {"cluster_config",
       {{"sim_prefilter", r.cluster.sim_prefilter},
        {"eps", r.cluster.eps},
        {"min_samples", r.cluster.min_samples}}},
      {"micro_clone_config",
       {{"window", r.micro_clone_config.window},
        {"similarity_threshold", r.micro_clone_config.similarity_threshold}}},
      {"corpus_stats",
       {{"total_satd", s.total_satd},
        {"removed_filter1", s.removed_filter1},
        {"removed_filter2", s.removed_filter2},
        {"after_filtering", s.after_filtering},
        {"duplicate_satd_count", s.duplicate_satd_count},
        {"group_count", s.group_count},
        {"duplicate_ratio", opt(s.duplicate_ratio)},
        {"duplicate_ratio_after_filtering", opt(s.duplicate_ratio_after_filtering)}}},
      {"group_stats", r.group_stats},
      {"pair_distribution", distribution_json(r.pairs)},
      {"removal_delta_days", nullptr},
      {"micro_clone_heuristic", nullptr},
      {"block_clones", nullptr},
      {"warnings", r.warnings}};
  if (r.removal_delta)
    j["removal_delta_days"] = {{"count", r.removal_delta->count},
                               {"mean", r.removal_delta->mean},
                               {"median", r.removal_delta->median}};
  if (r.micro_clone)
    j["micro_clone_heuristic"] = {{"pairs_evaluated", r.micro_clone->pairs_evaluated},
                                  {"clone", r.micro_clone->clone},
                                  {"not_clone", r.micro_clone->not_clone},
                                  {"unevaluable", r.micro_clone->unevaluable},
                                  {"groups_all_clone", r.micro_clone->groups_all_clone}};
  if (r.block_clones)
    j["block_clones"] = {{"group_count", r.block_clones->group_count},
                         {"groups_in_clone", r.block_clones->groups_in_clone},
                         {"group_ids_in_clone", r.block_clones->group_ids_in_clone}};
}

void from_json(const json &j, ProjectReport &r) {
  r = ProjectReport{};
  j.at("project").get_to(r.project);
  j.at("embedding_model").get_to(r.embedding_model);
  const auto &cc = j.at("cluster_config");
  cc.at("sim_prefilter").get_to(r.cluster.sim_prefilter);
  cc.at("eps").get_to(r.cluster.eps);
  cc.at("min_samples").get_to(r.cluster.min_samples);
  const auto &mc = j.at("micro_clone_config");
  mc.at("window").get_to(r.micro_clone_config.window);
  mc.at("similarity_threshold").get_to(r.micro_clone_config.similarity_threshold);
  const auto &s = j.at("corpus_stats");
  s.at("total_satd").get_to(r.corpus.total_satd);
  s.at("removed_filter1").get_to(r.corpus.removed_filter1);
  s.at("removed_filter2").get_to(r.corpus.removed_filter2);
  s.at("after_filtering").get_to(r.corpus.after_filtering);
  s.at("duplicate_satd_count").get_to(r.corpus.duplicate_satd_count);
  s.at("group_count").get_to(r.corpus.group_count);
  r.corpus.duplicate_ratio = get_opt<double>(s, "duplicate_ratio");
  r.corpus.duplicate_ratio_after_filtering = get_opt<double>(s, "duplicate_ratio_after_filtering");
  j.at("group_stats").get_to(r.group_stats);
  r.pairs = distribution_from_json(j.at("pair_distribution"));
  if (const auto &d = j.at("removal_delta_days"); !d.is_null())
    r.removal_delta = DeltaSummary{d.at("count").get<std::size_t>(), d.at("mean").get<double>(),
                                   d.at("median").get<double>()};
  if (const auto &m = j.at("micro_clone_heuristic"); !m.is_null())
    r.micro_clone = MicroCloneSummary{
        m.at("pairs_evaluated").get<std::size_t>(), m.at("clone").get<std::size_t>(),
        m.at("not_clone").get<std::size_t>(), m.at("unevaluable").get<std::size_t>(),
        m.at("groups_all_clone").get<std::size_t>()};
  if (const auto &b = j.at("block_clones"); !b.is_null())
    r.block_clones = CloneSummary{b.at("group_count").get<std::size_t>(),
                                  b.at("groups_in_clone").get<std::size_t>(),
                                  b.at("group_ids_in_clone").get<std::vector<std::uint64_t>>()};
  j.at("warnings").get_to(r.warnings);
}

void to_json(json &j, const MultiProjectReport &r) {
  json cmp = json::array();
  for (const auto &c : r.comparisons)
    cmp.push_back({{"project_a", c.project_a},
                   {"project_b", c.project_b},
                   {"groups_a", c.groups_a},
                   {"groups_b", c.groups_b},
                   {"u_a", c.u_a},
                   {"u_b", c.u_b},
                   {"p_value", c.p_value},
                   {"exact", c.exact}});
  j = json{{"projects", r.projects},
           {"combined_pair_distribution", distribution_json(r.combined)},
           {"same_file_ratio_comparisons", cmp}};
}

void from_json(const json &j, MultiProjectReport &r) {
  r = MultiProjectReport{};
  j.at("projects").get_to(r.projects);
  r.combined = distribution_from_json(j.at("combined_pair_distribution"));
  for (const auto &c : j.at("same_file_ratio_comparisons"))
    r.comparisons.push_back({c.at("project_a").get<std::string>(),
                             c.at("project_b").get<std::string>(),
                             c.at("groups_a").get<std::size_t>(), c.at("groups_b").get<std::size_t>(),
                             c.at("u_a").get<double>(), c.at("u_b").get<double>(),
                             c.at("p_value").get<double>(), c.at("exact").get<bool>()});
}

void write_corpus(const std::filesystem::path &path, const std::vector<SatdComment> &corpus) {
  std::string text;
  for (const auto &c : corpus) {
    text += json(c).dump();
    text.push_back('\n');
  }
  write_text_file(path, text);
}

std::vector<SatdComment> read_corpus(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cluster", "cannot open comments corpus " + path.string());
  std::vector<SatdComment> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      out.push_back(json::parse(line).get<SatdComment>());
    } catch (const std::exception &e) {
      throw Error("cluster", "malformed corpus record at line " + std::to_string(row) + " of " +
                                 path.string() + ": " + e.what());
    }
  }
  return out;
}

void write_embeddings(const std::filesystem::path &path, const std::string &model,
                      const std::map<SatdId, DenseVector> &vectors) {
  std::string text;
  for (const auto &[id, v] : vectors) {
    text += json{{"satd_id", id}, {"model", model}, {"vector", v}}.dump();
    text.push_back('\n');
  }
  write_text_file(path, text);
}

void write_groups(const std::filesystem::path &path, const ClusteringResult &clusters,
                  const CorpusIndex &corpus) {
  json groups = json::array();
  for (const auto &g : clusters.groups) {
    json jg = g;
    json dossier = json::array();
    for (auto id : g.member_satd_ids) {
      auto it = corpus.find(id);
      if (it == corpus.end())
        continue;
      const auto &c = *it->second;
      dossier.push_back({{"satd_id", id},
                         {"clean_text", c.clean_text},
                         {"raw_text", c.raw_text},
                         {"file_path_at_creation", c.file_path_at_creation},
                         {"created_in_commit", c.created_in_commit},
                         {"created_in_line", c.created_in_line},
                         {"deleted_in_commit", opt(c.deleted_in_commit)}});
    }
    jg["dossier"] = dossier;
    groups.push_back(jg);
  }
  write_text_file(path, json{{"embedding_model", clusters.embedding_model},
                             {"groups", groups},
                             {"noise", clusters.noise}}
                                .dump(2) +
                            "\n");
}

ClusteringResult read_groups(const std::filesystem::path &path) {
  auto j = read_json_file(path, "analyze");
  ClusteringResult r;
  try {
    j.at("groups").get_to(r.groups);
    j.at("noise").get_to(r.noise);
    r.embedding_model = j.value("embedding_model", std::string());
  } catch (const std::exception &e) {
    throw Error("analyze", "malformed groups document " + path.string() + ": " + e.what());
  }
  return r;
}

void write_pairs(const std::filesystem::path &path, const PairsDocument &doc) {
  json clone = json::object();
  for (const auto &[gid, in] : doc.group_in_clone)
    clone[std::to_string(gid)] = in;
  write_text_file(path, json{{"pairs", doc.pairs},
                             {"group_stats", doc.group_stats},
                             {"group_in_clone", clone}}
                                .dump(2) +
                            "\n");
}

PairsDocument read_pairs(const std::filesystem::path &path) {
  auto j = read_json_file(path, "report");
  PairsDocument doc;
  try {
    j.at("pairs").get_to(doc.pairs);
    j.at("group_stats").get_to(doc.group_stats);
    if (j.contains("group_in_clone"))
      for (const auto &[k, v] : j.at("group_in_clone").items())
        doc.group_in_clone[std::stoull(k)] = v.get<bool>();
  } catch (const std::exception &e) {
    throw Error("report", "malformed pairs document " + path.string() + ": " + e.what());
  }
  return doc;
}

void write_report(const std::filesystem::path &path, const ProjectReport &report) {
  write_text_file(path, json(report).dump(2) + "\n");
}

ProjectReport read_report(const std::filesystem::path &path) {
  try {
    return read_json_file(path, "report").get<ProjectReport>();
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error("report", "malformed report " + path.string() + ": " + e.what());
  }
}

void write_report(const std::filesystem::path &path, const MultiProjectReport &report) {
  write_text_file(path, json(report).dump(2) + "\n");
}

MultiProjectReport read_multi_report(const std::filesystem::path &path) {
  try {
    return read_json_file(path, "report").get<MultiProjectReport>();
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error("report", "malformed report " + path.string() + ": " + e.what());
  }
}

void dump_hunks(const std::filesystem::path &path, const std::vector<FileLineage> &lineages,
                const std::vector<HunkStream> &streams) {
  std::string text;
  for (const auto &l : lineages) {
    json segs = json::array();
    for (const auto &s : l.segments)
      segs.push_back({{"path", s.path},
                      {"first_commit_index", s.first_commit_index},
                      {"last_commit_index", s.last_commit_index}});
    text += json{{"record", "lineage"},
                 {"file_id", l.file_id},
                 {"final_path", l.final_path},
                 {"segments", segs},
                 {"terminated_at", opt(l.terminated_at)}}
                .dump();
    text.push_back('\n');
  }
  for (const auto &s : streams) {
    if (s.warning) {
      text += json{{"record", "warning"}, {"file_id", s.file_id}, {"message", *s.warning}}.dump();
      text.push_back('\n');
    }
    for (const auto &h : s.hunks) {
      text += json{{"record", "hunk"},
                   {"file_id", h.file_id},
                   {"sequence_index", h.sequence_index},
                   {"commit_id", h.commit_id},
                   {"old_start", h.old_start},
                   {"old_len", h.old_len},
                   {"new_start", h.new_start},
                   {"removed_lines", h.removed_lines},
                   {"added_lines", h.added_lines}}
                  .dump(-1, ' ', false, json::error_handler_t::replace);
      text.push_back('\n');
    }
  }
  write_text_file(path, text);
}

} // namespace satd
