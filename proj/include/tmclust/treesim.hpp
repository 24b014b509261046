#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tmclust/forest.hpp"
#include "tmclust/matrix.hpp"

namespace tmclust::treesim {

/// Node correspondence between two forests. Pairs hold level-order node
/// numbers (root = 1) and are sorted.
struct Mapping {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
  bool operator==(const Mapping&) const = default;
};

/// Maximum root-preserving common embedded subtree of two ordered labeled
/// trees: the largest one-to-one, label-preserving mapping that preserves
/// ancestorship and left-to-right order and contains the root pair. Empty
/// when the root labels differ.
///
/// Runs in O(n1 * n2 * min(depth, leaves)^2) time via the keyroot forest
/// recursion with deletions free and matches worth 1.
Mapping max_common_subtree(const TopicForest& t1, const TopicForest& t2);

/// Cardinality only; skips the traceback.
std::size_t common_subtree_size(const TopicForest& t1, const TopicForest& t2);

/// (2|M| - 2) / (n1 + n2 - 2); 1 when both forests hold only the root.
double tm_similarity(const TopicForest& t1, const TopicForest& t2);

inline constexpr const char* kMeasureName = "tm-sim";

/// Pairwise tm_similarity over all unordered pairs.
SimilarityMatrix build_matrix(const std::vector<TopicForest>& forests, unsigned threads = 0);

}  // namespace tmclust::treesim
