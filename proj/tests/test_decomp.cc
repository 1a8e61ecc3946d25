#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "emoxai/decomp.h"
#include "emoxai/error.h"
#include "oracles.h"

namespace emoxai {
namespace {

PcaConfig fixed(std::size_t k) {
  PcaConfig c;
  c.components = k;
  return c;
}

TEST(Pca, PointsOnDiagonal) {
  const auto m = PcaModel::fit(oracle::to_features({{1, 1}, {2, 2}, {3, 3}}), fixed(1));
  EXPECT_NEAR(m.component(0)[0], 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m.component(0)[1], 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m.explained_variance()[0], 2.0, 1e-12);
}

void expect_matches_oracle(const oracle::Matrix& x, const PcaModel& m, std::size_t k, double tol) {
  const auto ref = oracle::dense_pca(x, k);
  ASSERT_EQ(m.k(), k);
  for (std::size_t i = 0; i < k; ++i) {
    EXPECT_NEAR(m.explained_variance()[i], ref.variances[i], tol);
    for (std::size_t j = 0; j < x[0].size(); ++j) {
      EXPECT_NEAR(m.component(i)[j], ref.components[i][j], tol) << "component " << i;
    }
  }
}

void expect_orthonormal(const PcaModel& m, double tol) {
  for (std::size_t i = 0; i < m.k(); ++i) {
    for (std::size_t j = 0; j < m.k(); ++j) {
      double dot = 0;
      for (std::size_t f = 0; f < m.input_dim(); ++f) dot += m.component(i)[f] * m.component(j)[f];
      EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, tol);
    }
  }
}

TEST(Pca, FullRankMatchesOracleAndTotalVariance) {
  std::mt19937_64 gen(2);
  const auto x = oracle::random_matrix(gen, 10, 5);
  const auto m = PcaModel::fit(oracle::to_features(x), fixed(5));
  expect_matches_oracle(x, m, 5, 1e-8);
  double total = 0, explained = 0;
  const auto cov = oracle::covariance(x);
  for (std::size_t i = 0; i < 5; ++i) total += cov[i][i];
  for (double v : m.explained_variance()) explained += v;
  EXPECT_NEAR(explained, total, 1e-8);
  EXPECT_NEAR(m.total_variance(), total, 1e-8);
}

TEST(Pca, RandomSmallMatricesBothSolvers) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + gen() % 18, d = 2 + gen() % 19;
    const std::size_t k = 1 + gen() % std::min(n - 1, d);
    const auto x = oracle::random_matrix(gen, n, d);
    PcaConfig dense = fixed(k);
    expect_matches_oracle(x, PcaModel::fit(oracle::to_features(x), dense), k, 1e-6);
    PcaConfig iterative = fixed(k);
    iterative.dense_threshold = 0;
    iterative.seed = trial;
    const auto m = PcaModel::fit(oracle::to_features(x), iterative);
    expect_matches_oracle(x, m, k, 1e-6);
    expect_orthonormal(m, 1e-8);
  }
}

TEST(Pca, ProjectionIdentities) {
  std::mt19937_64 gen(4);
  const auto x = oracle::random_matrix(gen, 15, 6);
  const auto m = PcaModel::fit(oracle::to_features(x), fixed(4));
  for (double v : m.project(SparseVector::from_dense(m.mean()))) EXPECT_NEAR(v, 0.0, 1e-9);
  for (std::size_t i = 0; i < m.k(); ++i) {
    std::vector<double> p = m.mean();
    for (std::size_t f = 0; f < p.size(); ++f) p[f] += 2.5 * m.component(i)[f];
    const auto y = m.project(SparseVector::from_dense(p));
    for (std::size_t j = 0; j < m.k(); ++j) EXPECT_NEAR(y[j], i == j ? 2.5 : 0.0, 1e-8);
  }
  // Explicit matrix-vector oracle.
  const auto q = oracle::random_matrix(gen, 1, 6)[0];
  const auto y = m.project(SparseVector::from_dense(q));
  for (std::size_t i = 0; i < m.k(); ++i) {
    double s = 0;
    for (std::size_t f = 0; f < q.size(); ++f) s += m.component(i)[f] * (q[f] - m.mean()[f]);
    EXPECT_NEAR(y[i], s, 1e-8);
  }
  EXPECT_THROW(m.project(SparseVector(3)), DataError);
}

TEST(Pca, ReconstructionErrorNonIncreasingInK) {
  std::mt19937_64 gen(8);
  const auto x = oracle::random_matrix(gen, 12, 7);
  double previous = INFINITY;
  for (std::size_t k = 1; k <= 7; ++k) {
    const auto m = PcaModel::fit(oracle::to_features(x), fixed(k));
    double err = 0;
    for (const auto& row : x) {
      const auto y = m.project(SparseVector::from_dense(row));
      for (std::size_t f = 0; f < row.size(); ++f) {
        double r = m.mean()[f];
        for (std::size_t i = 0; i < k; ++i) r += y[i] * m.component(i)[f];
        err += (row[f] - r) * (row[f] - r);
      }
    }
    EXPECT_LE(err, previous + 1e-9);
    previous = err;
  }
}

TEST(Pca, AutoComponentCount) {
  // Variance 100, 1, 0.01 along the axes: 95% needs exactly one component.
  oracle::Matrix x;
  for (int s : {-1, 1}) {
    x.push_back({10.0 * s, 0, 0});
    x.push_back({0, 1.0 * s, 0});
    x.push_back({0, 0, 0.1 * s});
  }
  const auto m = PcaModel::fit(oracle::to_features(x), PcaConfig{});
  EXPECT_EQ(m.k(), 1u);
  PcaConfig target;
  target.variance_target = 0.999;
  EXPECT_EQ(PcaModel::fit(oracle::to_features(x), target).k(), 2u);
}

TEST(Pca, Errors) {
  EXPECT_THROW(PcaModel::fit(oracle::to_features({{1, 2}, {1, 2}}), fixed(1)), DataError);
  EXPECT_THROW(PcaModel::fit(oracle::to_features({{1, 2}, {3, 1}}), fixed(3)), ConfigError);
  EXPECT_THROW(PcaModel::fit(oracle::to_features({{1, 2}}), fixed(1)), ConfigError);
}

TEST(Pca, SparseHighDimensionalUsesIterationAndIsDeterministic) {
  std::mt19937_64 gen(12);
  FeatureMatrix x;
  x.dim = 700;
  for (int i = 0; i < 60; ++i) {
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (int j = 0; j < 8; ++j) pairs.push_back({static_cast<std::uint32_t>(gen() % 700), 1.0 + (gen() % 5)});
    x.rows.push_back(SparseVector::from_pairs(700, pairs));
  }
  PcaConfig c = fixed(5);
  c.seed = 3;
  const auto a = PcaModel::fit(x, c);
  const auto b = PcaModel::fit(x, c);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_GT(a.iterations(), 0u);
  expect_orthonormal(a, 1e-8);
  for (std::size_t i = 1; i < a.k(); ++i) EXPECT_LE(a.explained_variance()[i], a.explained_variance()[i - 1]);

  // Same spectrum as the dense path on the same data.
  PcaConfig dense = c;
  dense.dense_threshold = 1000;
  const auto ref = PcaModel::fit(x, dense);
  for (std::size_t i = 0; i < a.k(); ++i) EXPECT_NEAR(a.explained_variance()[i], ref.explained_variance()[i], 1e-7);

  const auto back = PcaModel::from_json(nlohmann::json::parse(a.to_json().dump()));
  EXPECT_EQ(back.to_json().dump(), a.to_json().dump());
}

}  // namespace
}  // namespace emoxai
