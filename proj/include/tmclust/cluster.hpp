#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tmclust/matrix.hpp"

namespace tmclust::cluster {

enum class Linkage { kSingle, kComplete, kAverage };

std::string_view linkage_name(Linkage l);
Linkage parse_linkage(std::string_view name);

struct Merge {
  std::size_t left;   // smaller cluster id
  std::size_t right;  // larger cluster id
  double similarity;
  std::size_t merged;  // new cluster id, N + merge index

  bool operator==(const Merge&) const = default;
};

/// Leaves are document indices 0..N-1; merge k creates cluster N + k.
struct Dendrogram {
  std::size_t leaves = 0;
  Linkage linkage = Linkage::kAverage;
  std::vector<Merge> merges;

  nlohmann::json to_json(const std::vector<std::string>& ids = {}) const;
  static Dendrogram from_json(const nlohmann::json& j);
};

struct ClusterAssignment {
  std::size_t k = 0;
  // doc index -> cluster in 0..k-1; clusters are numbered by their
  // smallest document index.
  std::vector<std::size_t> assignment;

  std::string to_csv(const std::vector<std::string>& ids) const;
};

/// Greedy agglomeration in similarity space: repeatedly merges the pair of
/// active clusters with maximum linkage similarity, ties going to the
/// lexicographically smallest (id, id) pair. Linkage similarities are
/// maintained with the Lance-Williams update.
/// Throws ValidationError for an asymmetric or out-of-range matrix.
Dendrogram hac(const SimilarityMatrix& matrix, Linkage linkage = Linkage::kAverage);

/// Components left after undoing the last k-1 merges. Throws UsageError
/// unless 1 <= k <= N.
ClusterAssignment cut(const Dendrogram& d, std::size_t k);

}  // namespace tmclust::cluster
