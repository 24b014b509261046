#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmclust/cluster.hpp"

namespace tmclust::evalx {

/// counts[i][j]: documents of cluster i with gold class j. Classes are kept
/// in sorted label order.
struct ContingencyTable {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t cluster_size(std::size_t i) const;
  std::size_t total() const;
};

/// Throws ValidationError naming the first document without a label.
/// `classes`, when non-empty, fixes the class set (so a class absent from
/// this sample still counts toward |L|).
ContingencyTable contingency(const cluster::ClusterAssignment& assign,
                             const std::vector<std::string>& gold,
                             const std::vector<std::string>& doc_ids = {},
                             std::vector<std::string> classes = {});

/// Builds a table straight from counts, mainly for tests.
ContingencyTable table_from_counts(std::vector<std::vector<std::size_t>> counts);

double cluster_purity(const ContingencyTable& t, std::size_t i);
/// Size-weighted mean of per-cluster purity; empty clusters are skipped.
double purity(const ContingencyTable& t);

/// Class entropy of cluster i with log base |L| (0 when |L| <= 1).
double cluster_entropy(const ContingencyTable& t, std::size_t i);
double entropy(const ContingencyTable& t);

struct ClusterScore {
  std::size_t size = 0;
  double purity = 0.0;
  double entropy = 0.0;
};

struct EvalReport {
  std::string dataset;
  std::string measure;
  std::string linkage;
  std::size_t k = 0;
  double purity = 0.0;
  double entropy = 0.0;
  std::vector<ClusterScore> clusters;

  nlohmann::json to_json() const;
  /// dataset,measure,k,purity,entropy
  std::string csv_row() const;
};

EvalReport evaluate(const ContingencyTable& t, std::string dataset, std::string measure,
                    std::string linkage = {});

}  // namespace tmclust::evalx
