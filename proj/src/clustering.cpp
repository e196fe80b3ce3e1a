#include "satd_radar/clustering.hpp"

#include "satd_radar/error.hpp"
#include "satd_radar/parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace satd {

double dot(const DenseVector &a, const DenseVector &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

double dot(const SparseVector &a, const SparseVector &b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.index.size() && j < b.index.size()) {
    if (a.index[i] < b.index[j]) {
      ++i;
    } else if (a.index[i] > b.index[j]) {
      ++j;
    } else {
      s += a.value[i++] * b.value[j++];
    }
  }
  return s;
}

std::map<SatdId, DenseVector> load_embeddings(const std::filesystem::path &path,
                                              const std::vector<SatdId> &corpus_ids,
                                              std::string *model) {
  std::ifstream in(path);
  if (!in)
    throw Error("cluster", "cannot open embeddings file " + path.string());
  std::set<SatdId> wanted(corpus_ids.begin(), corpus_ids.end());
  std::map<SatdId, DenseVector> out;
  std::size_t dim = 0;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const std::exception &e) {
      throw Error("cluster", "malformed embeddings record at line " + std::to_string(row));
    }
    if (!rec.contains("satd_id") || !rec.contains("vector") || !rec["vector"].is_array())
      throw Error("cluster", "embeddings record at line " + std::to_string(row) +
                                 " lacks satd_id or vector");
    auto id = rec["satd_id"].get<SatdId>();
    if (model && rec.contains("model") && rec["model"].is_string())
      *model = rec["model"].get<std::string>();
    DenseVector v;
    for (const auto &x : rec["vector"]) {
      if (!x.is_number() || !std::isfinite(x.get<double>()))
        throw Error("cluster", "non-finite vector component for satd_id " + std::to_string(id));
      v.push_back(x.get<double>());
    }
    if (dim == 0)
      dim = v.size();
    if (v.size() != dim || dim == 0)
      throw Error("cluster", "dimension mismatch for satd_id " + std::to_string(id) + ": got " +
                                 std::to_string(v.size()) + ", expected " + std::to_string(dim));
    if (!wanted.count(id))
      continue;
    double norm = std::sqrt(dot(v, v));
    if (norm == 0.0)
      throw Error("cluster", "zero vector for satd_id " + std::to_string(id));
    if (std::abs(norm - 1.0) > 1e-4)
      for (auto &x : v)
        x /= norm;
    out[id] = std::move(v);
  }
  for (auto id : corpus_ids)
    if (!out.count(id))
      throw Error("cluster", "missing embedding for satd_id " + std::to_string(id));
  return out;
}

std::map<SatdId, SparseVector> lexical_fallback_embed(const std::map<SatdId, std::string> &texts) {
  auto grams_of = [](const std::string &text) {
    std::string low(text);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::map<std::string, double> tf;
    if (low.size() < 3) {
      if (!low.empty())
        tf[low] += 1.0;
      return tf;
    }
    for (std::size_t i = 0; i + 3 <= low.size(); ++i)
      tf[low.substr(i, 3)] += 1.0;
    return tf;
  };

  std::vector<std::map<std::string, double>> tfs;
  std::map<std::string, std::size_t> df;
  for (const auto &[id, text] : texts) {
    tfs.push_back(grams_of(text));
    for (const auto &[g, c] : tfs.back())
      ++df[g];
  }
  // Vocabulary indices follow lexicographic gram order.
  std::unordered_map<std::string, std::uint32_t> vocab;
  for (const auto &[g, count] : df)
    vocab.emplace(g, static_cast<std::uint32_t>(vocab.size()));

  const double n = static_cast<double>(texts.size());
  std::map<SatdId, SparseVector> out;
  std::size_t k = 0;
  for (const auto &[id, text] : texts) {
    SparseVector v;
    double norm2 = 0.0;
    for (const auto &[g, c] : tfs[k]) {
      double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(df[g]))) + 1.0;
      double w = c * idf;
      v.index.push_back(vocab.at(g));
      v.value.push_back(w);
      norm2 += w * w;
    }
    double norm = std::sqrt(norm2);
    if (norm > 0)
      for (auto &x : v.value)
        x /= norm;
    out[id] = std::move(v);
    ++k;
  }
  return out;
}

namespace {

template <typename Vec>
SimilarityMatrix build_matrix(const std::map<SatdId, Vec> &vectors) {
  SimilarityMatrix m;
  std::vector<const Vec *> rows;
  for (const auto &[id, v] : vectors) {
    m.comment_ids.push_back(id);
    rows.push_back(&v);
  }
  const std::size_t n = rows.size();
  m.values.assign(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    m.values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = dot(*rows[i], *rows[j]);
      m.values[i * n + j] = s;
      m.values[j * n + i] = s;
    }
  });
  return m;
}

} // namespace

SimilarityMatrix similarity_matrix(const std::map<SatdId, DenseVector> &vectors) {
  return build_matrix(vectors);
}

SimilarityMatrix similarity_matrix(const std::map<SatdId, SparseVector> &vectors) {
  return build_matrix(vectors);
}

void ClusterConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0, 1)");
  if (min_samples < 2)
    throw std::invalid_argument("min_samples must be at least 2");
  if (!(sim_prefilter > 0.0 && sim_prefilter <= 1.0))
    throw std::invalid_argument("sim_prefilter must lie in (0, 1]");
}

std::vector<SatdId> prefilter(const SimilarityMatrix &matrix, double sim_prefilter) {
  std::vector<SatdId> kept;
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && matrix.at(i, j) >= sim_prefilter) {
        kept.push_back(matrix.comment_ids[i]);
        break;
      }
  return kept;
}

std::vector<long> dbscan_labels(const std::vector<double> &distances, std::size_t n, double eps,
                                std::size_t min_samples) {
  auto neighbors = [&](std::size_t p) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n; ++q)
      if (distances[p * n + q] <= eps || p == q)
        out.push_back(q);
    return out;
  };

  constexpr long kUnvisited = -2;
  constexpr long kNoise = -1;
  std::vector<long> label(n, kUnvisited);
  long cluster = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (label[p] != kUnvisited)
      continue;
    auto seeds = neighbors(p);
    if (seeds.size() < min_samples) {
      label[p] = kNoise;
      continue;
    }
    label[p] = cluster;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      std::size_t q = queue.front();
      queue.pop_front();
      if (label[q] == kNoise)
        label[q] = cluster; // border point
      if (label[q] != kUnvisited)
        continue;
      label[q] = cluster;
      auto more = neighbors(q);
      if (more.size() >= min_samples)
        queue.insert(queue.end(), more.begin(), more.end());
    }
    ++cluster;
  }
  return label;
}

ClusteringResult dbscan(const SimilarityMatrix &matrix, const std::vector<SatdId> &retained,
                        const ClusterConfig &config) {
  config.validate();
  std::vector<SatdId> ids(retained);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::unordered_map<SatdId, std::size_t> row;
  for (std::size_t i = 0; i < matrix.size(); ++i)
    row[matrix.comment_ids[i]] = i;
  std::vector<std::size_t> idx;
  for (auto id : ids) {
    auto it = row.find(id);
    if (it == row.end())
      throw Error("cluster", "retained id " + std::to_string(id) + " not in similarity matrix");
    idx.push_back(it->second);
  }

  const std::size_t n = ids.size();
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dist[i * n + j] = 1.0 - matrix.at(idx[i], idx[j]);

  auto labels = dbscan_labels(dist, n, config.eps, config.min_samples);
  ClusteringResult result;
  std::map<long, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0) {
      result.noise.push_back(ids[i]);
      continue;
    }
    auto [it, fresh] = slot.emplace(labels[i], result.groups.size());
    if (fresh) {
      DuplicateGroup g;
      g.group_id = result.groups.size() + 1;
      result.groups.push_back(g);
    }
    result.groups[it->second].member_satd_ids.push_back(ids[i]);
  }
  return result;
}

} // namespace satd
