#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmclust/forest.hpp"

namespace tmclust::planted {

/// Synthetic corpus with known clusters. Each cluster owns a skeleton topic
/// tree; every document perturbs a fraction of the skeleton nodes (drop or
/// relabel) and grafts the same fraction of random extra nodes. Skeleton
/// labels come from one pool shared by all clusters. Document text is drawn
/// from a per-cluster vocabulary of which `shared_vocab` is common to all
/// clusters.
struct Params {
  std::size_t clusters = 4;
  std::size_t docs_per_cluster = 25;
  std::size_t skeleton_nodes = 16;  // excluding the root
  std::size_t label_pool = 40;
  double node_noise = 0.2;
  std::size_t vocab_per_cluster = 40;
  double shared_vocab = 0.5;
  std::size_t tokens_per_doc = 60;

  nlohmann::json to_json() const;
  static Params from_json(const nlohmann::json& j);
};

struct Doc {
  std::string id;
  std::string label;
  TopicForest forest;
  std::string text;
};

std::vector<Doc> generate(const Params& params, std::uint64_t seed);

/// <id>.xtm, <id>.txt and labels.csv, loadable in xtm-dir mode.
void write_xtm_dir(const std::vector<Doc>& docs, const std::filesystem::path& dir);

/// Deterministic pronounceable pseudo-word for an index.
std::string pseudo_word(std::size_t index, std::string_view prefix = {});

}  // namespace tmclust::planted
