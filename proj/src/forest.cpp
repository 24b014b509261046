#include "tmclust/forest.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "tmclust/error.hpp"

namespace tmclust {

TopicForest::TopicForest(std::string doc_id, std::string root_label)
    : doc_id_(std::move(doc_id)) {
  nodes_.push_back(TopicNode{std::move(root_label), kRoot, {}});
}

NodeId TopicForest::add_child(NodeId parent, std::string label) {
  if (parent >= nodes_.size()) {
    throw ValidationError("add_child: no node " + std::to_string(parent));
  }
  const NodeId id = nodes_.size();
  nodes_.push_back(TopicNode{std::move(label), parent, {}});
  auto& siblings = nodes_[parent].children;
  const auto pos = std::upper_bound(
      siblings.begin(), siblings.end(), id,
      [this](NodeId a, NodeId b) { return nodes_[a].label < nodes_[b].label; });
  siblings.insert(pos, id);
  return id;
}

void TopicForest::graft(NodeId parent, const TopicForest& other) {
  for (NodeId c : other.children(kRoot)) graft_from(parent, other, c);
}

void TopicForest::graft_from(NodeId parent, const TopicForest& other, NodeId from) {
  const NodeId copy = add_child(parent, other.label(from));
  for (NodeId c : other.children(from)) graft_from(copy, other, c);
}

void TopicForest::check_invariants() const {
  std::vector<int> seen(nodes_.size(), 0);
  std::vector<NodeId> stack{kRoot};
  seen[kRoot] = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    const auto& kids = nodes_[u].children;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const NodeId c = kids[i];
      if (c >= nodes_.size() || c == kRoot) {
        throw ValidationError("forest: bad child index under node " + std::to_string(u));
      }
      if (seen[c]++) throw ValidationError("forest: node " + std::to_string(c) + " has two parents");
      if (nodes_[c].parent != u) {
        throw ValidationError("forest: parent link of node " + std::to_string(c) + " is stale");
      }
      if (i > 0 && nodes_[kids[i]].label < nodes_[kids[i - 1]].label) {
        throw ValidationError("forest: children of node " + std::to_string(u) + " are not sorted");
      }
      stack.push_back(c);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ValidationError("forest: node " + std::to_string(i) + " unreachable");
  }
}

bool operator==(const TopicForest& a, const TopicForest& b) {
  if (a.size() != b.size()) return false;
  // Compare shape positionally via parallel traversal.
  std::vector<std::pair<NodeId, NodeId>> stack{{TopicForest::kRoot, TopicForest::kRoot}};
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    if (a.label(u) != b.label(v)) return false;
    const auto& ca = a.children(u);
    const auto& cb = b.children(v);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) stack.emplace_back(ca[i], cb[i]);
  }
  return a.doc_id() == b.doc_id();
}

std::vector<NodeId> nodes_in_level_order(const TopicForest& forest) {
  std::vector<NodeId> order;
  order.reserve(forest.size());
  std::deque<NodeId> queue{TopicForest::kRoot};
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    order.push_back(u);
    for (NodeId c : forest.children(u)) queue.push_back(c);
  }
  return order;
}

std::vector<std::size_t> number_nodes(const TopicForest& forest) {
  std::vector<std::size_t> number(forest.size(), 0);
  const auto order = nodes_in_level_order(forest);
  for (std::size_t k = 0; k < order.size(); ++k) number[order[k]] = k + 1;
  return number;
}

std::vector<std::size_t> node_depths(const TopicForest& forest) {
  std::vector<std::size_t> depth(forest.size(), 0);
  for (NodeId u : nodes_in_level_order(forest)) {
    for (NodeId c : forest.children(u)) depth[c] = depth[u] + 1;
  }
  return depth;
}

namespace {

void dump_into(const TopicForest& f, NodeId u, std::size_t depth, std::ostringstream& out) {
  out << std::string(depth * 2, ' ') << f.label(u) << '\n';
  for (NodeId c : f.children(u)) dump_into(f, c, depth + 1, out);
}

nlohmann::json node_to_json(const TopicForest& f, NodeId u) {
  nlohmann::json kids = nlohmann::json::array();
  for (NodeId c : f.children(u)) kids.push_back(node_to_json(f, c));
  return {{"label", f.label(u)}, {"children", std::move(kids)}};
}

void node_from_json(TopicForest& f, NodeId parent, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("label") || !j["label"].is_string()) {
    throw ValidationError("forest json: node without string \"label\"");
  }
  const NodeId id = f.add_child(parent, j["label"].get<std::string>());
  if (j.contains("children")) {
    for (const auto& c : j["children"]) node_from_json(f, id, c);
  }
}

}  // namespace

std::string dump_tree(const TopicForest& forest) {
  std::ostringstream out;
  dump_into(forest, TopicForest::kRoot, 0, out);
  return out.str();
}

nlohmann::json forest_to_json(const TopicForest& forest) {
  auto j = node_to_json(forest, TopicForest::kRoot);
  if (!forest.doc_id().empty()) j["doc_id"] = forest.doc_id();
  return j;
}

TopicForest forest_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("label") || !j["label"].is_string()) {
    throw ValidationError("forest json: root without string \"label\"");
  }
  TopicForest f(j.value("doc_id", std::string{}), j["label"].get<std::string>());
  if (j.contains("children")) {
    for (const auto& c : j["children"]) node_from_json(f, TopicForest::kRoot, c);
  }
  return f;
}

}  // namespace tmclust
