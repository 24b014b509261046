#include "tmclust/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "tmclust/error.hpp"

namespace tmclust::cluster {

std::string_view linkage_name(Linkage l) {
  switch (l) {
    case Linkage::kSingle: return "single";
    case Linkage::kComplete: return "complete";
    case Linkage::kAverage: return "average";
  }
  return "?";
}

Linkage parse_linkage(std::string_view name) {
  for (auto l : {Linkage::kSingle, Linkage::kComplete, Linkage::kAverage}) {
    if (linkage_name(l) == name) return l;
  }
  throw UsageError("unknown linkage '" + std::string(name) + "'");
}

Dendrogram hac(const SimilarityMatrix& matrix, Linkage linkage) {
  matrix.validate();
  const std::size_t n = matrix.size();
  if (n < 2) throw ValidationError("hac: need at least 2 documents");

  // sim is indexed by slot; slot s holds cluster ids[s] while active[s].
  std::vector<double> sim(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sim[i * n + j] = matrix(i, j);
  }
  std::vector<std::size_t> ids(n), sizes(n, 1);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<bool> active(n, true);

  Dendrogram d;
  d.leaves = n;
  d.linkage = linkage;
  d.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = -std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_key{};
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double s = sim[i * n + j];
        const std::pair<std::size_t, std::size_t> key{std::min(ids[i], ids[j]),
                                                      std::max(ids[i], ids[j])};
        if (s > best || (s == best && key < best_key)) {
          best = s;
          best_key = key;
          bi = i;
          bj = j;
        }
      }
    }

    const std::size_t merged = n + step;
    d.merges.push_back(Merge{best_key.first, best_key.second, best, merged});

    // The merged cluster takes slot bi.
    const double ni = static_cast<double>(sizes[bi]);
    const double nj = static_cast<double>(sizes[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double a = sim[bi * n + k];
      const double b = sim[bj * n + k];
      double s = 0.0;
      switch (linkage) {
        case Linkage::kSingle: s = std::max(a, b); break;
        case Linkage::kComplete: s = std::min(a, b); break;
        case Linkage::kAverage: s = (ni * a + nj * b) / (ni + nj); break;
      }
      sim[bi * n + k] = sim[k * n + bi] = s;
    }
    active[bj] = false;
    ids[bi] = merged;
    sizes[bi] += sizes[bj];
  }
  return d;
}

ClusterAssignment cut(const Dendrogram& d, std::size_t k) {
  const std::size_t n = d.leaves;
  if (k < 1 || k > n) {
    throw UsageError("cut: k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
  if (d.merges.size() + 1 != n) throw ValidationError("cut: dendrogram does not have N-1 merges");

  // Union-find over cluster ids 0..2N-2, applying the first N-k merges.
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t m = 0; m < n - k; ++m) {
    const auto& merge = d.merges[m];
    parent[find(merge.left)] = merge.merged;
    parent[find(merge.right)] = merge.merged;
  }

  ClusterAssignment out;
  out.k = k;
  out.assignment.resize(n);
  std::vector<std::size_t> label(2 * n - 1, static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t doc = 0; doc < n; ++doc) {
    const std::size_t r = find(doc);
    if (label[r] == static_cast<std::size_t>(-1)) label[r] = next++;
    out.assignment[doc] = label[r];
  }
  return out;
}

nlohmann::json Dendrogram::to_json(const std::vector<std::string>& ids) const {
  nlohmann::json merges_json = nlohmann::json::array();
  for (const auto& m : merges) {
    merges_json.push_back(
        {{"left", m.left}, {"right", m.right}, {"similarity", m.similarity}, {"merged", m.merged}});
  }
  nlohmann::json j{{"leaves", leaves},
                   {"linkage", std::string(linkage_name(linkage))},
                   {"merges", std::move(merges_json)}};
  if (!ids.empty()) j["ids"] = ids;
  return j;
}

Dendrogram Dendrogram::from_json(const nlohmann::json& j) {
  Dendrogram d;
  d.leaves = j.at("leaves").get<std::size_t>();
  d.linkage = parse_linkage(j.at("linkage").get<std::string>());
  for (const auto& m : j.at("merges")) {
    d.merges.push_back(Merge{m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                             m.at("similarity").get<double>(), m.at("merged").get<std::size_t>()});
  }
  return d;
}

std::string ClusterAssignment::to_csv(const std::vector<std::string>& ids) const {
  if (ids.size() != assignment.size()) throw ValidationError("assignment: id count mismatch");
  std::string out = "doc_id,cluster\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i] + "," + std::to_string(assignment[i]) + "\n";
  }
  return out;
}

}  // namespace tmclust::cluster
