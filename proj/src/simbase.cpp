#include "tmclust/simbase.hpp"

#include <algorithm>
#include <cmath>

#include "tmclust/error.hpp"

namespace tmclust::simbase {

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::kEuclidean: return "euclidean";
    case Measure::kCosine: return "cosine";
    case Measure::kJaccard: return "jaccard";
    case Measure::kKld: return "kld";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  for (auto m : {Measure::kEuclidean, Measure::kCosine, Measure::kJaccard, Measure::kKld}) {
    if (measure_name(m) == name) return m;
  }
  throw UsageError("unknown vector measure '" + std::string(name) + "'");
}

namespace {

// Calls f(wa, wb) for every term in the union of supports, in term order.
template <typename F>
void merge_supports(const TermVector& a, const TermVector& b, F&& f) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      f(ea[i++].second, 0.0);
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      f(0.0, eb[j++].second);
    } else {
      f(ea[i++].second, eb[j++].second);
    }
  }
}

double total_mass(const TermVector& v) {
  double s = 0.0;
  for (const auto& e : v.entries()) s += e.second;
  return s;
}

}  // namespace

double dot(const TermVector& a, const TermVector& b) {
  double s = 0.0;
  merge_supports(a, b, [&s](double x, double y) { s += x * y; });
  return s;
}

double cosine_sim(const TermVector& a, const TermVector& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  return std::clamp(dot(a, b) / (a.norm() * b.norm()), 0.0, 1.0);
}

double euclidean_sim(const TermVector& a, const TermVector& b) {
  const double sa = a.norm() == 0.0 ? 0.0 : 1.0 / a.norm();
  const double sb = b.norm() == 0.0 ? 0.0 : 1.0 / b.norm();
  double sq = 0.0;
  merge_supports(a, b, [&](double x, double y) {
    const double d = x * sa - y * sb;
    sq += d * d;
  });
  return 1.0 / (1.0 + std::sqrt(sq));
}

double jaccard_sim(const TermVector& a, const TermVector& b) {
  const double ab = dot(a, b);
  const double denom = a.norm() * a.norm() + b.norm() * b.norm() - ab;
  if (denom <= 0.0) return 0.0;
  return std::clamp(ab / denom, 0.0, 1.0);
}

double kld_sim(const TermVector& a, const TermVector& b) {
  for (const auto* v : {&a, &b}) {
    if (v->is_zero()) {
      throw ValidationError("kld: document '" + v->doc_id() + "' has an all-zero term vector");
    }
  }
  const double ma = total_mass(a);
  const double mb = total_mass(b);
  double jsd = 0.0;
  merge_supports(a, b, [&](double x, double y) {
    const double p = x / ma;
    const double q = y / mb;
    const double m = 0.5 * (p + q);
    if (p > 0.0) jsd += 0.5 * p * std::log2(p / m);
    if (q > 0.0) jsd += 0.5 * q * std::log2(q / m);
  });
  return std::clamp(1.0 - jsd, 0.0, 1.0);
}

double similarity(Measure m, const TermVector& a, const TermVector& b) {
  switch (m) {
    case Measure::kEuclidean: return euclidean_sim(a, b);
    case Measure::kCosine: return cosine_sim(a, b);
    case Measure::kJaccard: return jaccard_sim(a, b);
    case Measure::kKld: return kld_sim(a, b);
  }
  return 0.0;
}

SimilarityMatrix build_matrix_base(Measure m, const std::vector<TermVector>& vectors,
                                   unsigned threads) {
  std::vector<std::string> ids;
  ids.reserve(vectors.size());
  for (const auto& v : vectors) ids.push_back(v.doc_id());
  if (m == Measure::kKld) {
    // Pairs never visit the diagonal, so zero vectors are rejected here too.
    for (const auto& v : vectors) {
      if (v.is_zero()) {
        throw ValidationError("kld: document '" + v.doc_id() + "' has an all-zero term vector");
      }
    }
  }
  return assemble_matrix(
      std::string(measure_name(m)), std::move(ids),
      [&](std::size_t i, std::size_t j) {
        try {
          return similarity(m, vectors[i], vectors[j]);
        } catch (const ValidationError& e) {
          throw ValidationError(std::string(e.what()) + " [pair " + vectors[i].doc_id() + ", " +
                                vectors[j].doc_id() + "]");
        }
      },
      threads);
}

}  // namespace tmclust::simbase
