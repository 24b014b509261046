#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "tmclust/error.hpp"
#include "tmclust/forest.hpp"
#include "tmclust/pipeline.hpp"
#include "tmclust/xtm.hpp"

using namespace tmclust;
using namespace tmclust::xtm;

namespace {

std::string fixture(const std::string& name) {
  return pipeline::read_text_file(std::string(TMCLUST_FIXTURE_DIR) + "/" + name);
}

TopicMapDoc make_doc(std::vector<std::pair<std::string, std::string>> topics,
                     std::vector<std::pair<std::string, std::string>> edges,
                     std::string type = "parent-child") {
  TopicMapDoc doc;
  doc.doc_id = "d";
  for (auto& [id, name] : topics) doc.topics.push_back({id, name});
  for (auto& [p, c] : edges) doc.associations.push_back({type, p, c, type, "parent", "child"});
  return doc;
}

}  // namespace

TEST(Xtm, ParsesThreeTopicFixture) {
  const auto doc = parse_xtm(fixture("three_topics.xtm"), "three");
  ASSERT_EQ(doc.topics.size(), 3u);
  ASSERT_EQ(doc.associations.size(), 2u);
  EXPECT_EQ(doc.topics[1].name, "domestic cat");
  EXPECT_EQ(doc.associations[0].assoc_type, "superclass-subclass");
  EXPECT_EQ(doc.associations[0].parent_role, "animal");
  EXPECT_EQ(doc.associations[0].child_role, "cat");
  // role order is reversed in the second association; role types decide
  EXPECT_EQ(doc.associations[1].parent_role, "animal");
  EXPECT_EQ(doc.associations[1].child_role, "dog");
  ASSERT_EQ(doc.occurrences.size(), 1u);
  EXPECT_EQ(doc.occurrences[0].topic, "animal");
  EXPECT_EQ(doc.occurrences[0].value, "A living organism.");

  const auto f = derive_forest(doc);
  EXPECT_EQ(dump_tree(f), std::string(kDocRootLabel) + "\n  animal\n    dog\n    domestic cat\n");
}

TEST(Xtm, EmptyTopicMap) {
  const auto doc = parse_xtm(fixture("empty.xtm"));
  EXPECT_TRUE(doc.topics.empty());
  EXPECT_TRUE(doc.associations.empty());
  EXPECT_EQ(derive_forest(doc).size(), 1u);
}

TEST(Xtm, FirstNameWins) {
  const auto doc = parse_xtm(fixture("two_names.xtm"));
  ASSERT_EQ(doc.topics.size(), 1u);
  EXPECT_EQ(doc.topics[0].name, "first name");
}

TEST(Xtm, NamelessTopicFallsBackToId) {
  const auto doc = parse_xtm("<topicMap><topic id='Lonely  One'/></topicMap>");
  ASSERT_EQ(doc.topics.size(), 1u);
  EXPECT_EQ(doc.topics[0].name, "lonely one");
}

TEST(Xtm, Xtm1Subset) {
  const auto doc = parse_xtm(fixture("xtm1.xtm"));
  ASSERT_EQ(doc.associations.size(), 1u);
  EXPECT_EQ(doc.associations[0].assoc_type, "broader-narrower");
  EXPECT_EQ(doc.associations[0].parent_role, "vehicle");
  EXPECT_EQ(doc.associations[0].child_role, "car");
  EXPECT_EQ(derive_forest(doc).size(), 3u);
}

TEST(Xtm, MalformedXmlReportsOffset) {
  const auto bytes = fixture("malformed.xtm");
  try {
    parse_xtm(bytes, "bad");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.byte_offset(), 0u);
    EXPECT_LE(e.byte_offset(), bytes.size());
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
  EXPECT_THROW(parse_xtm("<a><b></a>"), ParseError);
  EXPECT_THROW(parse_xtm(""), ParseError);
}

TEST(Xtm, DuplicateIdNamesTheId) {
  try {
    parse_xtm(fixture("duplicate_id.xtm"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
}

TEST(Xtm, DanglingRoleIsRejected) {
  EXPECT_THROW(parse_xtm(fixture("dangling.xtm")), ValidationError);
}

TEST(Xtm, SelfAssociationIsRejected) {
  EXPECT_THROW(make_doc({{"a", "a"}}, {{"a", "a"}}).validate(), ValidationError);
}

TEST(Xtm, NormalizeLabel) {
  EXPECT_EQ(normalize_label("  Hello \t\n World  "), "hello world");
  EXPECT_EQ(normalize_label("   "), "");
}

TEST(Xtm, SerializeParseFixpoint) {
  for (const char* name : {"three_topics.xtm", "two_names.xtm", "xtm1.xtm", "empty.xtm"}) {
    const auto first = parse_xtm(fixture(name), name);
    const auto second = parse_xtm(serialize_xtm(first), name);
    EXPECT_EQ(first, second) << name;
  }
  // escaping survives
  auto doc = make_doc({{"x&y", "a <b> & \"c\""}, {"z", "z"}}, {{"x&y", "z"}});
  doc.occurrences.push_back({"z", "1 < 2 & 3 > 2", "note"});
  EXPECT_EQ(parse_xtm(serialize_xtm(doc), "d"), doc);
}

TEST(DeriveForest, ParentWithTwoChildren) {
  const auto f = derive_forest(make_doc({{"a", "a"}, {"b", "b"}, {"c", "c"}}, {{"a", "c"}, {"a", "b"}}));
  EXPECT_EQ(f.size(), 4u);
  ASSERT_EQ(f.children(TopicForest::kRoot).size(), 1u);
  const NodeId a = f.children(TopicForest::kRoot)[0];
  EXPECT_EQ(f.label(a), "a");
  ASSERT_EQ(f.children(a).size(), 2u);
  EXPECT_EQ(f.label(f.children(a)[0]), "b");
  EXPECT_EQ(f.label(f.children(a)[1]), "c");
}

TEST(DeriveForest, FlatWithoutAssociations) {
  const auto f = derive_forest(make_doc({{"y", "y"}, {"x", "x"}}, {}));
  EXPECT_EQ(dump_tree(f), std::string(kDocRootLabel) + "\n  x\n  y\n");
}

TEST(DeriveForest, CycleDropsEdgeFromLargerParent) {
  const auto f = derive_forest(make_doc({{"a", "a"}, {"b", "b"}}, {{"a", "b"}, {"b", "a"}}));
  EXPECT_EQ(dump_tree(f), std::string(kDocRootLabel) + "\n  a\n    b\n");
}

TEST(DeriveForest, MultipleParentsKeepSmallestLabel) {
  const auto f = derive_forest(
      make_doc({{"p2", "zeta"}, {"p1", "alpha"}, {"c", "child"}}, {{"p2", "c"}, {"p1", "c"}}));
  EXPECT_EQ(dump_tree(f), std::string(kDocRootLabel) + "\n  alpha\n    child\n  zeta\n");
}

TEST(DeriveForest, NonHierarchicalAssociationsIgnored) {
  const auto doc = make_doc({{"a", "a"}, {"b", "b"}}, {{"a", "b"}}, "related-to");
  EXPECT_EQ(derive_forest(doc).children(TopicForest::kRoot).size(), 2u);
  ForestOptions opts;
  opts.hierarchical_types.insert("related-to");
  EXPECT_EQ(derive_forest(doc, opts).children(TopicForest::kRoot).size(), 1u);
}

TEST(DeriveForest, SchemaTopicsExcluded) {
  // "superclass-subclass", "superclass" and "subclass" are used as types
  auto doc = make_doc({{"a", "a"}, {"b", "b"}, {"superclass-subclass", "superclass-subclass"}}, {});
  doc.associations.push_back({"superclass-subclass", "a", "b", "superclass-subclass", "superclass", "subclass"});
  const auto f = derive_forest(doc);
  EXPECT_EQ(f.size(), 3u);
}

TEST(DeriveForest, IndependentOfTopicOrder) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    TopicMapDoc doc;
    doc.doc_id = "perm";
    const int n = 8;
    for (int i = 0; i < n; ++i) {
      doc.topics.push_back({"t" + std::to_string(i), std::string(1, static_cast<char>('a' + rng() % 4))});
    }
    for (int e = 0; e < 10; ++e) {
      const auto p = rng() % n, c = rng() % n;
      if (p == c) continue;
      doc.associations.push_back({"parent-child", "t" + std::to_string(p), "t" + std::to_string(c),
                                  "parent-child", "parent", "child"});
    }
    const auto reference = derive_forest(doc);
    reference.check_invariants();
    EXPECT_EQ(reference.size(), static_cast<std::size_t>(n) + 1);
    auto shuffled = doc;
    std::shuffle(shuffled.topics.begin(), shuffled.topics.end(), rng);
    std::shuffle(shuffled.associations.begin(), shuffled.associations.end(), rng);
    EXPECT_EQ(derive_forest(shuffled), reference);
  }
}

TEST(DeriveForest, TopicMapFromForestRoundTrip) {
  const auto f = forest_from_json(nlohmann::json::parse(fixture("tree_fixture.json")));
  auto doc = topic_map_from_forest(f);
  auto back = derive_forest(parse_xtm(serialize_xtm(doc)));
  EXPECT_EQ(dump_tree(back), dump_tree(f));
}

TEST(Forest, NumberingExamples) {
  TopicForest two;
  const auto a = two.add_child(TopicForest::kRoot, "a");
  const auto b = two.add_child(TopicForest::kRoot, "b");
  auto num = number_nodes(two);
  EXPECT_EQ(num[TopicForest::kRoot], 1u);
  EXPECT_EQ(num[a], 2u);
  EXPECT_EQ(num[b], 3u);

  EXPECT_EQ(number_nodes(TopicForest{}), std::vector<std::size_t>{1});

  TopicForest chain;
  const auto ca = chain.add_child(TopicForest::kRoot, "a");
  const auto cb = chain.add_child(ca, "b");
  num = number_nodes(chain);
  EXPECT_EQ(num[ca], 2u);
  EXPECT_EQ(num[cb], 3u);
}

TEST(Forest, NumberingIsBijectiveAndDepthMonotone) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    TopicForest f;
    const auto n = 1 + rng() % 30;
    for (std::size_t k = 1; k < n; ++k) {
      f.add_child(rng() % f.size(), std::string(1, static_cast<char>('a' + rng() % 3)));
    }
    const auto num = number_nodes(f);
    const auto depth = node_depths(f);
    auto sorted = num;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) ASSERT_EQ(sorted[k], k + 1);
    for (NodeId u = 0; u < f.size(); ++u) {
      for (NodeId v = 0; v < f.size(); ++v) {
        if (depth[u] < depth[v]) ASSERT_LT(num[u], num[v]);
      }
    }
  }
}

TEST(Forest, SiblingsStaySortedAndJsonRoundTrips) {
  TopicForest f("doc");
  const auto z = f.add_child(TopicForest::kRoot, "zz");
  f.add_child(TopicForest::kRoot, "aa");
  f.add_child(z, "m");
  f.add_child(z, "b");
  f.check_invariants();
  EXPECT_EQ(f.label(f.children(TopicForest::kRoot)[0]), "aa");
  EXPECT_EQ(forest_from_json(forest_to_json(f)), f);
  EXPECT_THROW(forest_from_json(nlohmann::json::parse(R"({"children": []})")), ValidationError);
}
