#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tmclust {

/// Label of the synthetic node placed above every top-level topic.
inline constexpr std::string_view kDocRootLabel = "\xE2\x9F\xA8" "DOC" "\xE2\x9F\xA9";

using NodeId = std::size_t;

struct TopicNode {
  std::string label;
  NodeId parent = 0;  // meaningless for the root
  std::vector<NodeId> children;
};

/// A document reduced to rooted, ordered, labeled trees under one synthetic
/// root. Nodes live in an arena; identity is positional, labels may repeat.
///
/// Children of every node are kept sorted by label. Insertion of an equal
/// label goes after existing equal labels, so the order among duplicates is
/// the insertion order.
class TopicForest {
 public:
  static constexpr NodeId kRoot = 0;

  explicit TopicForest(std::string doc_id = {},
                       std::string root_label = std::string(kDocRootLabel));

  NodeId add_child(NodeId parent, std::string label);

  const std::string& doc_id() const noexcept { return doc_id_; }
  void set_doc_id(std::string id) { doc_id_ = std::move(id); }

  std::size_t size() const noexcept { return nodes_.size(); }
  const TopicNode& node(NodeId id) const { return nodes_.at(id); }
  const std::string& label(NodeId id) const { return nodes_.at(id).label; }
  const std::vector<NodeId>& children(NodeId id) const { return nodes_.at(id).children; }
  NodeId parent(NodeId id) const { return nodes_.at(id).parent; }
  bool is_root(NodeId id) const noexcept { return id == kRoot; }

  /// Deep-copies `other` (minus its root) under `parent`, keeping sibling order.
  void graft(NodeId parent, const TopicForest& other);

  // Throws ValidationError if sibling order, parent links, or reachability
  // are broken. Forests built through add_child always pass.
  void check_invariants() const;

  friend bool operator==(const TopicForest& a, const TopicForest& b);

 private:
  void graft_from(NodeId parent, const TopicForest& other, NodeId from);

  std::string doc_id_;
  std::vector<TopicNode> nodes_;
};

/// Level-order numbering: root is 1, then breadth-first, left to right.
/// Result is indexed by NodeId.
std::vector<std::size_t> number_nodes(const TopicForest& forest);

/// Inverse of number_nodes: entry k-1 is the node numbered k.
std::vector<NodeId> nodes_in_level_order(const TopicForest& forest);

std::vector<std::size_t> node_depths(const TopicForest& forest);

/// Indented text, one node per line, two spaces per depth level.
std::string dump_tree(const TopicForest& forest);

// {"label": str, "children": [...]}; the top level additionally carries
// "doc_id" when the forest has one.
nlohmann::json forest_to_json(const TopicForest& forest);
TopicForest forest_from_json(const nlohmann::json& j);

}  // namespace tmclust
