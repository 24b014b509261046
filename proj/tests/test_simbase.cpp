#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "tmclust/error.hpp"
#include "tmclust/simbase.hpp"

using namespace tmclust;
using namespace tmclust::simbase;

namespace {

TermVector vec(std::string id, std::vector<std::pair<std::string, double>> e) {
  return TermVector(std::move(id), std::move(e));
}

TermVector random_vector(std::mt19937_64& rng, std::string id, bool allow_zero = false) {
  std::uniform_real_distribution<double> w(0.1, 5.0);
  std::vector<std::pair<std::string, double>> e;
  for (char c = 'a'; c <= 'l'; ++c) {
    if (rng() % 3 == 0) e.emplace_back(std::string(1, c), w(rng));
  }
  if (e.empty() && !allow_zero) e.emplace_back("a", 1.0);
  return vec(std::move(id), std::move(e));
}

std::map<std::string, double> as_map(const TermVector& v) {
  return {v.entries().begin(), v.entries().end()};
}

}  // namespace

TEST(SimBase, WorkedPair) {
  const auto a = vec("a", {{"x", 1}, {"y", 1}});
  const auto b = vec("b", {{"x", 1}});
  EXPECT_NEAR(cosine_sim(a, b), 0.7071067811865475, 1e-12);
  EXPECT_NEAR(jaccard_sim(a, b), 0.5, 1e-12);
  EXPECT_NEAR(euclidean_sim(a, b), 0.5664544973505216, 1e-12);
  EXPECT_NEAR(kld_sim(a, b), 0.6887218755408672, 1e-12);
}

TEST(SimBase, DisjointAndIdentical) {
  const auto a = vec("a", {{"x", 2}});
  const auto b = vec("b", {{"y", 3}});
  EXPECT_EQ(cosine_sim(a, b), 0.0);
  EXPECT_EQ(jaccard_sim(a, b), 0.0);
  EXPECT_NEAR(euclidean_sim(a, b), 0.4142135623730951, 1e-12);
  EXPECT_NEAR(kld_sim(a, b), 0.0, 1e-12);
  for (Measure m : {Measure::kCosine, Measure::kJaccard, Measure::kEuclidean, Measure::kKld}) {
    EXPECT_NEAR(similarity(m, a, a), 1.0, 1e-12) << measure_name(m);
  }
}

TEST(SimBase, ZeroVectors) {
  const TermVector z("z", {});
  const auto a = vec("a", {{"x", 1}});
  EXPECT_EQ(cosine_sim(z, a), 0.0);
  EXPECT_EQ(jaccard_sim(z, z), 0.0);
  EXPECT_NEAR(euclidean_sim(z, a), 0.5, 1e-12);
  try {
    kld_sim(a, z);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'z'"), std::string::npos);
  }
  EXPECT_THROW(build_matrix_base(Measure::kKld, {a, z}), ValidationError);
  EXPECT_NO_THROW(build_matrix_base(Measure::kCosine, {a, z}));
}

TEST(SimBase, ScalingInvariance) {
  const auto a = vec("a", {{"x", 1}, {"y", 2}});
  const auto b = vec("b", {{"x", 3}, {"z", 1}});
  const auto b5 = vec("b", {{"x", 15}, {"z", 5}});
  EXPECT_NEAR(cosine_sim(a, b), cosine_sim(a, b5), 1e-12);
  EXPECT_NEAR(euclidean_sim(a, b), euclidean_sim(a, b5), 1e-12);
  EXPECT_NEAR(kld_sim(a, b), kld_sim(a, b5), 1e-12);
  // extended Jaccard depends on magnitude
  EXPECT_GT(std::abs(jaccard_sim(a, b) - jaccard_sim(a, b5)), 1e-3);
}

TEST(SimBase, KldMatchesDirectJsd) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_vector(rng, "a");
    const auto b = random_vector(rng, "b");
    EXPECT_NEAR(kld_sim(a, b), 1.0 - oracle::jsd_direct(as_map(a), as_map(b)), 1e-12);
  }
}

TEST(SimBase, PropertiesOnRandomVectors) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_vector(rng, "a", true);
    const auto b = random_vector(rng, "b", true);
    for (Measure m : {Measure::kCosine, Measure::kJaccard, Measure::kEuclidean}) {
      const double s = similarity(m, a, b);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0 + 1e-15);
      EXPECT_EQ(s, similarity(m, b, a));
    }
  }
}

TEST(SimBase, MatrixInvariants) {
  std::mt19937_64 rng(13);
  std::vector<TermVector> vs;
  for (int i = 0; i < 12; ++i) vs.push_back(random_vector(rng, "v" + std::to_string(i)));
  for (Measure m : {Measure::kCosine, Measure::kJaccard, Measure::kEuclidean, Measure::kKld}) {
    const auto mat = build_matrix_base(m, vs, 3);
    EXPECT_NO_THROW(mat.validate());
    EXPECT_EQ(mat.measure(), measure_name(m));
    EXPECT_EQ(mat.to_csv(), build_matrix_base(m, vs, 1).to_csv());
    for (std::size_t i = 0; i < vs.size(); ++i) {
      EXPECT_EQ(mat(i, i), 1.0);
      for (std::size_t j = 0; j < vs.size(); ++j) EXPECT_EQ(mat(i, j), mat(j, i));
    }
  }
}

TEST(SimBase, ParseMeasure) {
  EXPECT_EQ(parse_measure("kld"), Measure::kKld);
  EXPECT_EQ(parse_measure("cosine"), Measure::kCosine);
  EXPECT_THROW(parse_measure("manhattan"), UsageError);
}

TEST(Matrix, CsvAndJsonRoundTrip) {
  auto m = SimilarityMatrix("cosine", {"a", "b", "c"});
  m.set(0, 1, 0.1);
  m.set(0, 2, 1.0 / 3.0);
  m.set(1, 2, 0.0);
  const auto from_csv = SimilarityMatrix::from_csv(m.to_csv(), "cosine");
  const auto from_json = SimilarityMatrix::from_json(m.to_json());
  EXPECT_EQ(from_csv.to_csv(), m.to_csv());
  EXPECT_EQ(from_json.to_csv(), m.to_csv());
  EXPECT_EQ(from_json(0, 2), 1.0 / 3.0);
  EXPECT_THROW(SimilarityMatrix::from_values("x", {"a", "b"}, {1, 0.5, 0.4, 1}).validate(),
               ValidationError);
  EXPECT_THROW(SimilarityMatrix::from_values("x", {"a", "b"}, {1, 1.5, 1.5, 1}).validate(),
               ValidationError);
}
