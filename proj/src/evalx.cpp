#include "tmclust/evalx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "tmclust/error.hpp"

namespace tmclust::evalx {

std::size_t ContingencyTable::cluster_size(std::size_t i) const {
  return std::accumulate(counts.at(i).begin(), counts.at(i).end(), std::size_t{0});
}

std::size_t ContingencyTable::total() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) n += cluster_size(i);
  return n;
}

ContingencyTable contingency(const cluster::ClusterAssignment& assign,
                             const std::vector<std::string>& gold,
                             const std::vector<std::string>& doc_ids,
                             std::vector<std::string> classes) {
  const std::size_t n = assign.assignment.size();
  auto name = [&doc_ids](std::size_t d) {
    return d < doc_ids.size() ? doc_ids[d] : "#" + std::to_string(d);
  };
  for (std::size_t d = 0; d < n; ++d) {
    if (d >= gold.size() || gold[d].empty()) {
      throw ValidationError("document '" + name(d) + "' has no gold label");
    }
  }
  if (classes.empty()) {
    std::set<std::string> uniq(gold.begin(), gold.begin() + static_cast<std::ptrdiff_t>(n));
    classes.assign(uniq.begin(), uniq.end());
  } else {
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  }
  std::map<std::string, std::size_t> column;
  for (std::size_t j = 0; j < classes.size(); ++j) column[classes[j]] = j;

  ContingencyTable t;
  t.classes = std::move(classes);
  t.counts.assign(assign.k, std::vector<std::size_t>(t.classes.size(), 0));
  for (std::size_t d = 0; d < n; ++d) {
    const auto c = assign.assignment[d];
    if (c >= assign.k) throw ValidationError("document '" + name(d) + "' assigned to cluster out of range");
    const auto col = column.find(gold[d]);
    if (col == column.end()) {
      throw ValidationError("document '" + name(d) + "' has label '" + gold[d] +
                            "' outside the class set");
    }
    ++t.counts[c][col->second];
  }
  return t;
}

ContingencyTable table_from_counts(std::vector<std::vector<std::size_t>> counts) {
  ContingencyTable t;
  const std::size_t width = counts.empty() ? 0 : counts.front().size();
  for (const auto& row : counts) {
    if (row.size() != width) throw ValidationError("contingency: ragged rows");
  }
  for (std::size_t j = 0; j < width; ++j) t.classes.push_back("c" + std::to_string(j));
  t.counts = std::move(counts);
  return t;
}

double cluster_purity(const ContingencyTable& t, std::size_t i) {
  const std::size_t size = t.cluster_size(i);
  if (size == 0) return 0.0;
  const auto& row = t.counts[i];
  return static_cast<double>(*std::max_element(row.begin(), row.end())) / static_cast<double>(size);
}

double purity(const ContingencyTable& t) {
  const std::size_t n = t.total();
  if (n == 0) throw ValidationError("purity: empty contingency table");
  double sum = 0.0;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    const std::size_t size = t.cluster_size(i);
    if (size == 0) continue;
    sum += static_cast<double>(size) / static_cast<double>(n) * cluster_purity(t, i);
  }
  return sum;
}

double cluster_entropy(const ContingencyTable& t, std::size_t i) {
  const std::size_t size = t.cluster_size(i);
  if (size == 0 || t.classes.size() <= 1) return 0.0;
  const double base = std::log(static_cast<double>(t.classes.size()));
  double e = 0.0;
  for (std::size_t c : t.counts[i]) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(size);
    e -= p * std::log(p);
  }
  return e / base;
}

double entropy(const ContingencyTable& t) {
  const std::size_t n = t.total();
  if (n == 0) throw ValidationError("entropy: empty contingency table");
  double sum = 0.0;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    const std::size_t size = t.cluster_size(i);
    if (size == 0) continue;
    sum += static_cast<double>(size) / static_cast<double>(n) * cluster_entropy(t, i);
  }
  return sum;
}

EvalReport evaluate(const ContingencyTable& t, std::string dataset, std::string measure,
                    std::string linkage) {
  EvalReport r;
  r.dataset = std::move(dataset);
  r.measure = std::move(measure);
  r.linkage = std::move(linkage);
  r.k = t.counts.size();
  r.purity = purity(t);
  r.entropy = entropy(t);
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    r.clusters.push_back(ClusterScore{t.cluster_size(i), cluster_purity(t, i), cluster_entropy(t, i)});
  }
  return r;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& c : clusters) {
    per.push_back({{"size", c.size}, {"purity", c.purity}, {"entropy", c.entropy}});
  }
  return {{"dataset", dataset}, {"measure", measure}, {"linkage", linkage}, {"k", k},
          {"purity", purity},   {"entropy", entropy}, {"clusters", std::move(per)}};
}

std::string EvalReport::csv_row() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, ",%.6f,%.6f", purity, entropy);
  return dataset + "," + measure + "," + std::to_string(k) + buf;
}

}  // namespace tmclust::evalx
