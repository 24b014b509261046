#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tmclust/forest.hpp"

namespace tmclust::xtm {

struct Topic {
  std::string id;
  std::string name;  // normalized; never empty

  bool operator==(const Topic&) const = default;
};

/// A binary association. Raw type references are kept so that serializing
/// and re-parsing reproduces the same document.
struct Association {
  std::string assoc_type;   // normalized type label
  std::string parent_role;  // topic id
  std::string child_role;   // topic id
  std::string type_ref;
  std::string parent_role_type;
  std::string child_role_type;

  bool operator==(const Association&) const = default;
};

struct Occurrence {
  std::string topic;  // topic id
  std::string value;
  std::string type_ref;

  bool operator==(const Occurrence&) const = default;
};

struct TopicMapDoc {
  std::string doc_id;
  std::vector<Topic> topics;
  std::vector<Association> associations;
  std::vector<Occurrence> occurrences;

  /// Ids referenced as association, role or occurrence types. These are
  /// schema topics and take no part in the document's trees.
  std::set<std::string> type_refs() const;

  /// Throws ValidationError on duplicate ids, dangling references, empty
  /// names or self-associations.
  void validate() const;

  bool operator==(const TopicMapDoc&) const = default;
};

/// Lower-cases ASCII letters, trims, and collapses whitespace runs.
std::string normalize_label(std::string_view raw);

/// Parses the supported XTM subset: XTM 2.0 `name/value` and XTM 1.0
/// `baseName/baseNameString` names, `occurrence/resourceData`, and binary
/// `association`s (`role` or `member`) with typed roles. Unknown elements
/// are skipped. Throws ParseError for malformed XML and ValidationError for
/// id collisions and dangling references.
TopicMapDoc parse_xtm(std::string_view bytes, std::string doc_id = {});

/// XTM 2.0 text that parse_xtm reads back to an equal TopicMapDoc.
std::string serialize_xtm(const TopicMapDoc& doc);

struct ForestOptions {
  std::set<std::string> hierarchical_types{"superclass-subclass", "parent-child",
                                           "broader-narrower"};
};

TopicForest derive_forest(const TopicMapDoc& doc, const ForestOptions& options = {});

/// One topic per non-root node (ids t0001.. in level order) linked by
/// parent-child associations. derive_forest maps the result back onto an
/// equal forest.
TopicMapDoc topic_map_from_forest(const TopicForest& forest);

}  // namespace tmclust::xtm
