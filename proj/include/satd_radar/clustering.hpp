#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace satd {

using SatdId = std::uint64_t;
using DenseVector = std::vector<double>;

// Sorted-index sparse vector.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
};

double dot(const DenseVector &a, const DenseVector &b);
double dot(const SparseVector &a, const SparseVector &b);

// Reads an embeddings file (one JSON record per line: satd_id, model,
// vector) and returns the unit-normalized vectors of `corpus_ids`. Records
// for ids outside the corpus are ignored. Throws satd::Error (stage
// "cluster") on a missing id, a dimension mismatch or a non-finite value.
std::map<SatdId, DenseVector> load_embeddings(const std::filesystem::path &path,
                                              const std::vector<SatdId> &corpus_ids,
                                              std::string *model = nullptr);

// Character-trigram TF-IDF over lowercased texts, L2-normalized. idf uses
// the smoothed form ln((1 + N) / (1 + df)) + 1.
std::map<SatdId, SparseVector> lexical_fallback_embed(const std::map<SatdId, std::string> &texts);

struct SimilarityMatrix {
  std::vector<SatdId> comment_ids;
  std::vector<double> values; // row-major, size() * size()

  std::size_t size() const { return comment_ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
};

// Pairwise dot products of unit vectors; the diagonal is pinned to 1 and the
// upper triangle mirrored so the matrix is exactly symmetric.
SimilarityMatrix similarity_matrix(const std::map<SatdId, DenseVector> &vectors);
SimilarityMatrix similarity_matrix(const std::map<SatdId, SparseVector> &vectors);

struct ClusterConfig {
  double sim_prefilter = 0.8;
  double eps = 0.4;
  std::size_t min_samples = 2;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
  bool operator==(const ClusterConfig &) const = default;
};

// Ids with at least one other comment at similarity >= threshold.
std::vector<SatdId> prefilter(const SimilarityMatrix &matrix, double sim_prefilter);

// DBSCAN over a full row-major distance matrix. The neighborhood of a point
// includes the point itself. Points are visited in index order; a border
// point joins the first cluster that reaches it. Returns a label per point,
// clusters numbered from 0, -1 for noise.
std::vector<long> dbscan_labels(const std::vector<double> &distances, std::size_t n, double eps,
                                std::size_t min_samples);

struct DuplicateGroup {
  std::uint64_t group_id = 0;
  std::vector<SatdId> member_satd_ids; // ascending
  std::size_t n() const { return member_satd_ids.size(); }

  bool operator==(const DuplicateGroup &) const = default;
};

struct ClusteringResult {
  std::vector<DuplicateGroup> groups;
  std::vector<SatdId> noise;
  std::string embedding_model;

  bool operator==(const ClusteringResult &) const = default;
};

// DBSCAN on distance 1 - similarity over the retained ids, taken in
// ascending id order. Group ids start at 1.
ClusteringResult dbscan(const SimilarityMatrix &matrix, const std::vector<SatdId> &retained,
                        const ClusterConfig &config);

} // namespace satd
