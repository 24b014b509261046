#pragma once

// Test-only reference implementations. Nothing here shares code with the
// library paths it checks.

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tmclust/forest.hpp"
#include "tmclust/treesim.hpp"

namespace tmclust::oracle {

/// Parent-pointer view of a forest indexed by level-order number (1-based).
struct NumberedTree {
  std::vector<std::string> label;     // [1..n]
  std::vector<std::size_t> parent;    // [1..n], 0 for the root
  std::vector<std::vector<std::size_t>> children;  // [1..n], in sibling order
  std::size_t n = 0;

  explicit NumberedTree(const TopicForest& f);
  bool is_ancestor(std::size_t a, std::size_t d) const;  // proper ancestor
  bool is_left_of(std::size_t a, std::size_t b) const;
};

/// Checks the five mapping conditions independently of the DP. Returns an
/// empty string when valid, otherwise a description of the first violation.
std::string check_mapping(const TopicForest& t1, const TopicForest& t2,
                          const treesim::Mapping& m);

/// Exhaustive search over label-matched pairs. Throws std::invalid_argument
/// when either tree has more than 10 nodes.
treesim::Mapping brute_force_common_subtree(const TopicForest& t1, const TopicForest& t2);

/// Random ordered tree with `nodes` nodes (root included), labels drawn from
/// the first `alphabet` letters.
TopicForest random_tree(std::mt19937_64& rng, std::size_t nodes, std::size_t alphabet,
                        bool doc_root = false);

/// Direct summation of Jensen-Shannon divergence (base 2) over two
/// unnormalized weight maps.
double jsd_direct(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

}  // namespace tmclust::oracle
