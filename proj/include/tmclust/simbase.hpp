#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tmclust/matrix.hpp"
#include "tmclust/textpipe.hpp"

namespace tmclust::simbase {

using textpipe::TermVector;

enum class Measure { kEuclidean, kCosine, kJaccard, kKld };

std::string_view measure_name(Measure m);
/// Accepts "euclidean", "cosine", "jaccard", "kld".
Measure parse_measure(std::string_view name);

double dot(const TermVector& a, const TermVector& b);

/// dot / (|a| |b|); 0 when either vector is zero.
double cosine_sim(const TermVector& a, const TermVector& b);

/// 1 / (1 + |a/|a| - b/|b||); a zero vector stays at the origin.
double euclidean_sim(const TermVector& a, const TermVector& b);

/// Extended Jaccard: dot / (|a|^2 + |b|^2 - dot); 0 when both are zero.
double jaccard_sim(const TermVector& a, const TermVector& b);

/// 1 - JSD(p, q) with base-2 logs, where p and q are the vectors scaled to
/// unit mass. Throws ValidationError naming the document if either is zero.
double kld_sim(const TermVector& a, const TermVector& b);

double similarity(Measure m, const TermVector& a, const TermVector& b);

/// Pairwise matrix; a failing pair is reported with both document ids.
SimilarityMatrix build_matrix_base(Measure m, const std::vector<TermVector>& vectors,
                                   unsigned threads = 0);

}  // namespace tmclust::simbase
