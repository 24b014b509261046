#include "tmclust/planted.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "tmclust/error.hpp"
#include "tmclust/xtm.hpp"

namespace tmclust::planted {

nlohmann::json Params::to_json() const {
  return {{"clusters", clusters},
          {"docs_per_cluster", docs_per_cluster},
          {"skeleton_nodes", skeleton_nodes},
          {"label_pool", label_pool},
          {"node_noise", node_noise},
          {"vocab_per_cluster", vocab_per_cluster},
          {"shared_vocab", shared_vocab},
          {"tokens_per_doc", tokens_per_doc}};
}

Params Params::from_json(const nlohmann::json& j) {
  Params p;
  p.clusters = j.value("clusters", p.clusters);
  p.docs_per_cluster = j.value("docs_per_cluster", p.docs_per_cluster);
  p.skeleton_nodes = j.value("skeleton_nodes", p.skeleton_nodes);
  p.label_pool = j.value("label_pool", p.label_pool);
  p.node_noise = j.value("node_noise", p.node_noise);
  p.vocab_per_cluster = j.value("vocab_per_cluster", p.vocab_per_cluster);
  p.shared_vocab = j.value("shared_vocab", p.shared_vocab);
  p.tokens_per_doc = j.value("tokens_per_doc", p.tokens_per_doc);
  return p;
}

std::string pseudo_word(std::size_t index, std::string_view prefix) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  std::string w(prefix);
  // three consonant-vowel syllables; 70^3 distinct words
  for (int s = 0; s < 3; ++s) {
    const std::size_t syl = index % (kConsonants.size() * kVowels.size());
    index /= kConsonants.size() * kVowels.size();
    w.push_back(kConsonants[syl / kVowels.size()]);
    w.push_back(kVowels[syl % kVowels.size()]);
  }
  return w;
}

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

struct Skeleton {
  std::vector<std::string> labels;   // [0] is the root
  std::vector<std::size_t> parent;   // parent[0] unused
};

Skeleton make_skeleton(Rng& rng, const Params& p, const std::vector<std::string>& pool) {
  Skeleton s;
  s.labels.push_back(std::string(kDocRootLabel));
  s.parent.push_back(0);
  for (std::size_t k = 1; k <= p.skeleton_nodes; ++k) {
    s.labels.push_back(pool[pick(rng, pool.size())]);
    s.parent.push_back(pick(rng, k));
  }
  return s;
}

TopicForest perturb(Rng& rng, const Params& p, const Skeleton& s,
                    const std::vector<std::string>& pool, std::string doc_id) {
  TopicForest f(std::move(doc_id));
  // Skeleton parents precede children, so one forward pass suffices.
  std::vector<NodeId> image(s.labels.size(), TopicForest::kRoot);
  for (std::size_t k = 1; k < s.labels.size(); ++k) {
    const NodeId parent = image[s.parent[k]];
    if (coin(rng, p.node_noise)) {
      if (coin(rng, 0.5)) {
        image[k] = parent;  // dropped: descendants attach to the nearest kept ancestor
        continue;
      }
      image[k] = f.add_child(parent, pool[pick(rng, pool.size())]);
    } else {
      image[k] = f.add_child(parent, s.labels[k]);
    }
  }
  const auto extra = static_cast<std::size_t>(std::lround(p.node_noise * static_cast<double>(p.skeleton_nodes)));
  for (std::size_t e = 0; e < extra; ++e) f.add_child(pick(rng, f.size()), pool[pick(rng, pool.size())]);
  return f;
}

}  // namespace

std::vector<Doc> generate(const Params& p, std::uint64_t seed) {
  if (p.clusters == 0 || p.docs_per_cluster == 0 || p.label_pool == 0 || p.vocab_per_cluster == 0) {
    throw UsageError("planted: cluster, doc, label pool and vocabulary counts must be positive");
  }
  if (!(p.node_noise >= 0.0 && p.node_noise <= 1.0) ||
      !(p.shared_vocab >= 0.0 && p.shared_vocab <= 1.0)) {
    throw UsageError("planted: node_noise and shared_vocab must lie in [0,1]");
  }
  Rng rng(seed);

  std::vector<std::string> pool;
  for (std::size_t i = 0; i < p.label_pool; ++i) pool.push_back(pseudo_word(i, "q"));

  const auto shared = static_cast<std::size_t>(
      std::lround(p.shared_vocab * static_cast<double>(p.vocab_per_cluster)));
  const std::size_t own = p.vocab_per_cluster - shared;
  std::vector<std::vector<std::string>> vocab(p.clusters);
  for (std::size_t c = 0; c < p.clusters; ++c) {
    for (std::size_t i = 0; i < shared; ++i) vocab[c].push_back(pseudo_word(i, "w"));
    for (std::size_t i = 0; i < own; ++i) vocab[c].push_back(pseudo_word(shared + c * own + i, "w"));
  }

  std::vector<Skeleton> skeletons;
  for (std::size_t c = 0; c < p.clusters; ++c) skeletons.push_back(make_skeleton(rng, p, pool));

  std::vector<Doc> docs;
  char id[32];
  for (std::size_t c = 0; c < p.clusters; ++c) {
    for (std::size_t d = 0; d < p.docs_per_cluster; ++d) {
      std::snprintf(id, sizeof id, "c%02zu_d%03zu", c, d);
      Doc doc{id, "class" + std::to_string(c), perturb(rng, p, skeletons[c], pool, id), {}};
      for (std::size_t t = 0; t < p.tokens_per_doc; ++t) {
        doc.text += vocab[c][pick(rng, vocab[c].size())];
        doc.text += (t % 10 == 9) ? ".\n" : " ";
      }
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

void write_xtm_dir(const std::vector<Doc>& docs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream labels(dir / "labels.csv", std::ios::binary);
  if (!labels) throw IoError("cannot write " + (dir / "labels.csv").string());
  labels << "doc_id,label\n";
  for (const auto& d : docs) {
    std::ofstream xtm_out(dir / (d.id + ".xtm"), std::ios::binary);
    std::ofstream txt_out(dir / (d.id + ".txt"), std::ios::binary);
    if (!xtm_out || !txt_out) throw IoError("cannot write document files for " + d.id);
    xtm_out << xtm::serialize_xtm(xtm::topic_map_from_forest(d.forest));
    txt_out << d.text;
    labels << d.id << ',' << d.label << '\n';
  }
}

}  // namespace tmclust::planted
