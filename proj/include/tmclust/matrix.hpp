#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace tmclust {

/// Symmetric N x N similarity matrix with unit diagonal and entries in [0,1].
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::string measure, std::vector<std::string> ids);

  const std::string& measure() const noexcept { return measure_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v);

  /// Throws ValidationError on asymmetry beyond `tol`, a diagonal entry
  /// other than 1, or entries outside [0, 1].
  void validate(double tol = 1e-12) const;

  std::string to_csv() const;
  nlohmann::json to_json() const;
  static SimilarityMatrix from_csv(const std::string& text, std::string measure = {});
  static SimilarityMatrix from_json(const nlohmann::json& j);

  /// Raw row-major values, used when a caller wants to build a matrix that
  /// may violate the invariants (e.g. to test validation).
  static SimilarityMatrix from_values(std::string measure, std::vector<std::string> ids,
                                      std::vector<double> values);

 private:
  std::string measure_;
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// Fills the upper triangle by calling `pair_sim(i, j)` for every i < j,
/// fanned out over `threads` workers (0 = hardware concurrency). Each pair
/// writes only its own cell, so the result does not depend on scheduling.
/// Values are clamped to [0, 1] and the diagonal is set to 1.
/// An exception from any pair is rethrown after all workers stop.
SimilarityMatrix assemble_matrix(std::string measure, std::vector<std::string> ids,
                                 const std::function<double(std::size_t, std::size_t)>& pair_sim,
                                 unsigned threads = 0);

/// Shortest decimal form that round-trips the double.
std::string format_double(double v);

}  // namespace tmclust
