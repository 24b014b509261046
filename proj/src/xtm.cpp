#include "tmclust/xtm.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "tmclust/error.hpp"

namespace tmclust::xtm {

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char ch : raw) {
    if (std::isspace(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(ch)));
  }
  return out;
}

std::set<std::string> TopicMapDoc::type_refs() const {
  std::set<std::string> refs;
  auto add = [&refs](const std::string& r) {
    if (!r.empty()) refs.insert(r);
  };
  for (const auto& a : associations) {
    add(a.type_ref);
    add(a.parent_role_type);
    add(a.child_role_type);
  }
  for (const auto& o : occurrences) add(o.type_ref);
  return refs;
}

void TopicMapDoc::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& t : topics) {
    if (!ids.insert(t.id).second) {
      throw ValidationError("duplicate topic id '" + t.id + "' in " + doc_id);
    }
    if (t.name.empty()) throw ValidationError("topic '" + t.id + "' has an empty name");
  }
  for (const auto& a : associations) {
    for (const auto* role : {&a.parent_role, &a.child_role}) {
      if (!ids.count(*role)) {
        throw ValidationError("association references unknown topic '" + *role + "' in " +
                              doc_id);
      }
    }
    if (a.parent_role == a.child_role) {
      throw ValidationError("association of topic '" + a.parent_role + "' with itself in " +
                            doc_id);
    }
  }
  for (const auto& o : occurrences) {
    if (!ids.count(o.topic)) {
      throw ValidationError("occurrence references unknown topic '" + o.topic + "' in " +
                            doc_id);
    }
  }
}

namespace {

std::string_view local_name(std::string_view qname) {
  const auto colon = qname.rfind(':');
  return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

std::string ref_fragment(std::string_view href) {
  const auto hash = href.rfind('#');
  return std::string(hash == std::string_view::npos ? href : href.substr(hash + 1));
}

bool is_parent_role(const std::string& type) {
  const auto t = normalize_label(type);
  return t == "superclass" || t == "parent" || t == "broader";
}

bool is_child_role(const std::string& type) {
  const auto t = normalize_label(type);
  return t == "subclass" || t == "child" || t == "narrower";
}

struct RawRole {
  std::string type;
  std::string player;
};

// Expat callbacks must not throw, so a failure is recorded here and the
// parser is stopped.
struct ParseState {
  XML_Parser parser = nullptr;
  TopicMapDoc doc;
  std::unordered_set<std::string> seen_ids;
  std::optional<ValidationError> failure;

  std::vector<std::string> stack;  // local element names

  // current topic
  bool in_topic = false;
  std::string topic_id;
  std::vector<std::string> topic_names;
  std::string name_text;
  bool collecting_name = false;

  // current occurrence
  bool in_occurrence = false;
  std::string occ_type;
  std::optional<std::string> occ_value;
  std::string occ_text;
  bool collecting_occ = false;

  // current association
  bool in_association = false;
  std::string assoc_type;
  std::vector<RawRole> roles;
  bool in_role = false;
  RawRole role;

  std::string_view parent_elem() const {
    return stack.size() >= 2 ? std::string_view(stack[stack.size() - 2]) : std::string_view{};
  }
  std::string_view grandparent_elem() const {
    return stack.size() >= 3 ? std::string_view(stack[stack.size() - 3]) : std::string_view{};
  }

  void fail(std::string msg) {
    if (!failure) failure.emplace(std::move(msg));
    XML_StopParser(parser, XML_FALSE);
  }

  void on_start(std::string_view name, const XML_Char** atts) {
    stack.emplace_back(local_name(name));
    const std::string_view el = stack.back();
    auto attr = [atts](std::string_view wanted) -> std::optional<std::string> {
      for (int i = 0; atts[i]; i += 2) {
        if (local_name(atts[i]) == wanted) return std::string(atts[i + 1]);
      }
      return std::nullopt;
    };

    if (el == "topic" && !in_topic && !in_association) {
      in_topic = true;
      topic_id = attr("id").value_or("");
      topic_names.clear();
      if (topic_id.empty()) fail("topic without id attribute in " + doc.doc_id);
    } else if (in_topic && (el == "name" || el == "baseName") && !collecting_name &&
               !in_occurrence) {
      name_text.clear();
    } else if (in_topic && (el == "value" || el == "baseNameString") &&
               (parent_elem() == "name" || parent_elem() == "baseName")) {
      collecting_name = true;
      name_text.clear();
    } else if (in_topic && el == "occurrence") {
      in_occurrence = true;
      occ_type.clear();
      occ_value.reset();
    } else if (in_occurrence && el == "resourceData") {
      collecting_occ = true;
      occ_text.clear();
    } else if (el == "association" && !in_topic) {
      in_association = true;
      assoc_type.clear();
      roles.clear();
    } else if (in_association && (el == "role" || el == "member")) {
      in_role = true;
      role = RawRole{};
    } else if (el == "topicRef" || el == "subjectIndicatorRef") {
      on_topic_ref(attr("href").value_or(""));
    }
  }

  void on_topic_ref(const std::string& href) {
    const std::string ref = ref_fragment(href);
    const std::string_view up = parent_elem();
    const bool typed = up == "type" || up == "instanceOf" || up == "roleSpec";
    if (in_role) {
      if (typed) {
        role.type = ref;
      } else if (up == "role" || up == "member") {
        role.player = ref;
      }
    } else if (in_association && typed && (grandparent_elem() == "association")) {
      assoc_type = ref;
    } else if (in_occurrence && typed && grandparent_elem() == "occurrence") {
      occ_type = ref;
    }
  }

  void on_end() {
    const std::string el = stack.back();
    if (in_topic && collecting_name && (el == "value" || el == "baseNameString")) {
      collecting_name = false;
      topic_names.push_back(name_text);
    } else if (in_occurrence && collecting_occ && el == "resourceData") {
      collecting_occ = false;
      if (!occ_value) occ_value = occ_text;
    } else if (in_occurrence && el == "occurrence") {
      in_occurrence = false;
      if (occ_value) doc.occurrences.push_back(Occurrence{topic_id, *occ_value, occ_type});
    } else if (in_topic && el == "topic") {
      in_topic = false;
      finish_topic();
    } else if (in_role && (el == "role" || el == "member")) {
      in_role = false;
      roles.push_back(role);
    } else if (in_association && el == "association") {
      in_association = false;
      finish_association();
    }
    stack.pop_back();
  }

  void on_text(std::string_view text) {
    if (collecting_name) name_text.append(text);
    if (collecting_occ) occ_text.append(text);
  }

  void finish_topic() {
    if (!seen_ids.insert(topic_id).second) {
      fail("duplicate topic id '" + topic_id + "' in " + doc.doc_id);
      return;
    }
    std::string name;
    for (const auto& raw : topic_names) {
      name = normalize_label(raw);
      if (!name.empty()) break;
    }
    if (name.empty()) name = normalize_label(topic_id);
    doc.topics.push_back(Topic{topic_id, name});
  }

  void finish_association() {
    if (roles.size() != 2) return;
    std::size_t parent = 0;
    if (is_parent_role(roles[1].type) || is_child_role(roles[0].type)) parent = 1;
    const RawRole& p = roles[parent];
    const RawRole& c = roles[1 - parent];
    if (p.player.empty() || c.player.empty()) return;
    doc.associations.push_back(
        Association{normalize_label(assoc_type), p.player, c.player, assoc_type, p.type, c.type});
  }
};

extern "C" {
void XMLCALL xtm_start(void* user, const XML_Char* name, const XML_Char** atts) {
  static_cast<ParseState*>(user)->on_start(name, atts);
}
void XMLCALL xtm_end(void* user, const XML_Char*) { static_cast<ParseState*>(user)->on_end(); }
void XMLCALL xtm_text(void* user, const XML_Char* s, int len) {
  static_cast<ParseState*>(user)->on_text(std::string_view(s, static_cast<std::size_t>(len)));
}
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

void escape_into(std::string& out, std::string_view text, bool attribute) {
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(ch);
    }
  }
}

std::string escaped(std::string_view text, bool attribute = false) {
  std::string out;
  escape_into(out, text, attribute);
  return out;
}

void write_type(std::ostringstream& out, const std::string& ref) {
  if (ref.empty()) return;
  out << "<type><topicRef href=\"#" << escaped(ref, true) << "\"/></type>";
}

}  // namespace

TopicMapDoc parse_xtm(std::string_view bytes, std::string doc_id) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw Error("could not allocate XML parser");

  ParseState state;
  state.parser = parser.get();
  state.doc.doc_id = std::move(doc_id);
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), xtm_start, xtm_end);
  XML_SetCharacterDataHandler(parser.get(), xtm_text);

  const auto status =
      XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE);
  if (state.failure) throw *state.failure;
  if (status != XML_STATUS_OK) {
    const auto offset = XML_GetCurrentByteIndex(parser.get());
    throw ParseError(std::string("malformed XML in '") + state.doc.doc_id +
                         "': " + XML_ErrorString(XML_GetErrorCode(parser.get())),
                     offset < 0 ? 0 : static_cast<std::size_t>(offset));
  }
  state.doc.validate();
  return std::move(state.doc);
}

std::string serialize_xtm(const TopicMapDoc& doc) {
  std::map<std::string, std::vector<const Occurrence*>> occ_by_topic;
  for (const auto& o : doc.occurrences) occ_by_topic[o.topic].push_back(&o);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<topicMap xmlns=\"http://www.topicmaps.org/xtm/\" version=\"2.0\">\n";
  for (const auto& t : doc.topics) {
    out << "  <topic id=\"" << escaped(t.id, true) << "\">\n"
        << "    <name><value>" << escaped(t.name) << "</value></name>\n";
    for (const Occurrence* o : occ_by_topic[t.id]) {
      out << "    <occurrence>";
      write_type(out, o->type_ref);
      out << "<resourceData>" << escaped(o->value) << "</resourceData></occurrence>\n";
    }
    out << "  </topic>\n";
  }
  for (const auto& a : doc.associations) {
    out << "  <association>";
    write_type(out, a.type_ref);
    out << "\n    <role>";
    write_type(out, a.parent_role_type);
    out << "<topicRef href=\"#" << escaped(a.parent_role, true) << "\"/></role>\n    <role>";
    write_type(out, a.child_role_type);
    out << "<topicRef href=\"#" << escaped(a.child_role, true) << "\"/></role>\n"
        << "  </association>\n";
  }
  out << "</topicMap>\n";
  return out.str();
}

TopicForest derive_forest(const TopicMapDoc& doc, const ForestOptions& options) {
  const auto schema = doc.type_refs();

  // Topics in canonical (name, id) order so the input list order is irrelevant.
  std::vector<const Topic*> topics;
  for (const auto& t : doc.topics) {
    if (!schema.count(t.id)) topics.push_back(&t);
  }
  std::sort(topics.begin(), topics.end(), [](const Topic* a, const Topic* b) {
    return std::tie(a->name, a->id) < std::tie(b->name, b->id);
  });
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < topics.size(); ++i) index.emplace(topics[i]->id, i);

  // Candidate edges as (parent rank, child rank); rank order equals
  // (label, id) order, so sorting the pairs sorts by (parent, child).
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& a : doc.associations) {
    if (!options.hierarchical_types.count(a.assoc_type)) continue;
    const auto p = index.find(a.parent_role);
    const auto c = index.find(a.child_role);
    if (p == index.end() || c == index.end() || p->second == c->second) continue;
    edges.emplace_back(p->second, c->second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(topics.size(), kNone);
  auto creates_cycle = [&parent, kNone](std::size_t p, std::size_t c) {
    for (std::size_t u = p; u != kNone; u = parent[u]) {
      if (u == c) return true;
    }
    return false;
  };
  for (auto [p, c] : edges) {
    if (parent[c] != kNone || creates_cycle(p, c)) continue;
    parent[c] = p;
  }

  std::vector<std::vector<std::size_t>> kids(topics.size());
  std::vector<std::size_t> tops;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    (parent[i] == kNone ? tops : kids[parent[i]]).push_back(i);
  }

  TopicForest forest(doc.doc_id);
  // Ranks are visited in increasing order, so equal-label siblings keep id order.
  std::vector<std::pair<std::size_t, NodeId>> work;
  for (std::size_t t : tops) work.emplace_back(t, forest.add_child(TopicForest::kRoot, topics[t]->name));
  while (!work.empty()) {
    auto [t, node] = work.back();
    work.pop_back();
    for (std::size_t c : kids[t]) work.emplace_back(c, forest.add_child(node, topics[c]->name));
  }
  return forest;
}

TopicMapDoc topic_map_from_forest(const TopicForest& forest) {
  TopicMapDoc doc;
  doc.doc_id = forest.doc_id();
  const auto order = nodes_in_level_order(forest);
  std::vector<std::string> ids(forest.size());
  char buf[16];
  for (std::size_t k = 1; k < order.size(); ++k) {
    std::snprintf(buf, sizeof buf, "t%04zu", k);
    ids[order[k]] = buf;
    doc.topics.push_back(Topic{buf, forest.label(order[k])});
  }
  for (std::size_t k = 1; k < order.size(); ++k) {
    const NodeId u = order[k];
    const NodeId p = forest.parent(u);
    if (forest.is_root(p)) continue;
    doc.associations.push_back(
        Association{"parent-child", ids[p], ids[u], "parent-child", "parent", "child"});
  }
  return doc;
}

}  // namespace tmclust::xtm
