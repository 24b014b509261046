#include "tmclust/treesim.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace tmclust::treesim {

namespace {

using LabelTable = std::unordered_map<std::string, int>;

// Tree in 1-based postorder with leftmost-leaf links and keyroots.
struct PreparedTree {
  std::vector<int> label;     // [1..n]
  std::vector<int> leftmost;  // [1..n], postorder index of leftmost leaf
  std::vector<NodeId> node;   // [1..n] -> NodeId
  std::vector<int> keyroots;  // ascending
  int n = 0;
};

PreparedTree prepare(const TopicForest& f, LabelTable& labels) {
  PreparedTree t;
  t.n = static_cast<int>(f.size());
  t.label.assign(t.n + 1, 0);
  t.leftmost.assign(t.n + 1, 0);
  t.node.assign(t.n + 1, 0);

  std::vector<int> post(f.size(), 0);
  // Iterative postorder: (node, next child index).
  std::vector<std::pair<NodeId, std::size_t>> stack{{TopicForest::kRoot, 0}};
  int counter = 0;
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto& kids = f.children(u);
    if (next < kids.size()) {
      const NodeId c = kids[next++];
      stack.emplace_back(c, 0);
      continue;
    }
    const int k = ++counter;
    post[u] = k;
    t.node[k] = u;
    const auto [it, inserted] = labels.try_emplace(f.label(u), static_cast<int>(labels.size()));
    t.label[k] = it->second;
    t.leftmost[k] = kids.empty() ? k : t.leftmost[post[kids.front()]];
    stack.pop_back();
  }

  // A keyroot is the highest node sharing its leftmost leaf.
  std::vector<int> highest(t.n + 1, 0);
  for (int k = 1; k <= t.n; ++k) highest[t.leftmost[k]] = k;
  for (int k = 1; k <= t.n; ++k) {
    if (highest[t.leftmost[k]] == k) t.keyroots.push_back(k);
  }
  return t;
}

class Aligner {
 public:
  Aligner(const PreparedTree& a, const PreparedTree& b)
      : a_(a), b_(b), td_(static_cast<std::size_t>(a.n + 1) * (b.n + 1), 0) {
    for (int i : a_.keyroots) {
      for (int j : b_.keyroots) fill(i, j);
    }
  }

  // Best root-preserving score: the roots matched plus the best mapping
  // between the two child forests.
  int rooted_score() {
    if (a_.label[a_.n] != b_.label[b_.n]) return 0;
    fill(a_.n, b_.n);
    return at(a_.n - 1 - a_.leftmost[a_.n] + 1, b_.n - 1 - b_.leftmost[b_.n] + 1) + 1;
  }

  std::vector<std::pair<int, int>> rooted_pairs() {
    std::vector<std::pair<int, int>> out;
    if (a_.label[a_.n] != b_.label[b_.n]) return out;
    std::vector<std::pair<int, int>> pending;
    out.emplace_back(a_.n, b_.n);
    trace(a_.n, b_.n, a_.n - 1, b_.n - 1, out, pending);
    while (!pending.empty()) {
      const auto [i, j] = pending.back();
      pending.pop_back();
      trace(i, j, i, j, out, pending);
    }
    return out;
  }

 private:
  int& td(int i, int j) { return td_[static_cast<std::size_t>(i) * (b_.n + 1) + j]; }
  int& at(int x, int y) { return fd_[static_cast<std::size_t>(x) * cols_ + y]; }

  // Forest table for the subtrees rooted at i and j; records tree-vs-tree
  // cells into td.
  void fill(int i, int j) {
    const int li = a_.leftmost[i];
    const int lj = b_.leftmost[j];
    const int rows = i - li + 2;
    cols_ = static_cast<std::size_t>(j - lj + 2);
    fd_.assign(static_cast<std::size_t>(rows) * cols_, 0);
    for (int di = li; di <= i; ++di) {
      const int x = di - li + 1;
      for (int dj = lj; dj <= j; ++dj) {
        const int y = dj - lj + 1;
        int best = std::max(at(x - 1, y), at(x, y - 1));
        if (a_.leftmost[di] == li && b_.leftmost[dj] == lj) {
          if (a_.label[di] == b_.label[dj]) best = std::max(best, at(x - 1, y - 1) + 1);
          td(di, dj) = best;
        } else {
          best = std::max(best, at(a_.leftmost[di] - li, b_.leftmost[dj] - lj) + td(di, dj));
        }
        at(x, y) = best;
      }
    }
  }

  // Walks back from cell (di, dj) of the (i, j) table. Tree-vs-tree cells
  // that were taken whole from td are queued as new subproblems.
  void trace(int i, int j, int di, int dj, std::vector<std::pair<int, int>>& out,
             std::vector<std::pair<int, int>>& pending) {
    fill(i, j);
    const int li = a_.leftmost[i];
    const int lj = b_.leftmost[j];
    while (di >= li && dj >= lj) {
      const int x = di - li + 1;
      const int y = dj - lj + 1;
      const int here = at(x, y);
      if (here == at(x - 1, y)) {
        --di;
      } else if (here == at(x, y - 1)) {
        --dj;
      } else if (a_.leftmost[di] == li && b_.leftmost[dj] == lj) {
        out.emplace_back(di, dj);
        --di;
        --dj;
      } else {
        pending.emplace_back(di, dj);
        di = a_.leftmost[di] - 1;
        dj = b_.leftmost[dj] - 1;
      }
    }
  }

  const PreparedTree& a_;
  const PreparedTree& b_;
  std::vector<int> td_;
  std::vector<int> fd_;
  std::size_t cols_ = 0;
};

double similarity_from_size(std::size_t matched, std::size_t n1, std::size_t n2) {
  if (matched == 0) return 0.0;
  if (n1 + n2 == 2) return 1.0;
  return static_cast<double>(2 * matched - 2) / static_cast<double>(n1 + n2 - 2);
}

}  // namespace

Mapping max_common_subtree(const TopicForest& t1, const TopicForest& t2) {
  LabelTable labels;
  const auto a = prepare(t1, labels);
  const auto b = prepare(t2, labels);
  Aligner aligner(a, b);
  const auto num1 = number_nodes(t1);
  const auto num2 = number_nodes(t2);
  Mapping m;
  for (auto [i, j] : aligner.rooted_pairs()) m.pairs.emplace_back(num1[a.node[i]], num2[b.node[j]]);
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

std::size_t common_subtree_size(const TopicForest& t1, const TopicForest& t2) {
  LabelTable labels;
  const auto a = prepare(t1, labels);
  const auto b = prepare(t2, labels);
  return static_cast<std::size_t>(Aligner(a, b).rooted_score());
}

double tm_similarity(const TopicForest& t1, const TopicForest& t2) {
  return similarity_from_size(common_subtree_size(t1, t2), t1.size(), t2.size());
}

SimilarityMatrix build_matrix(const std::vector<TopicForest>& forests, unsigned threads) {
  LabelTable labels;
  std::vector<PreparedTree> prepared;
  std::vector<std::string> ids;
  prepared.reserve(forests.size());
  for (const auto& f : forests) {
    prepared.push_back(prepare(f, labels));
    ids.push_back(f.doc_id());
  }
  return assemble_matrix(
      kMeasureName, std::move(ids),
      [&](std::size_t i, std::size_t j) {
        const auto matched = static_cast<std::size_t>(Aligner(prepared[i], prepared[j]).rooted_score());
        return similarity_from_size(matched, forests[i].size(), forests[j].size());
      },
      threads);
}

}  // namespace tmclust::treesim
