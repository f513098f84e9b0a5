#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "dimple/baseline.hpp"
#include "dimple/generator.hpp"
#include "dimple/linalg.hpp"
#include "dimple/rng.hpp"

using dimple::AdjacencyTensor;
using dimple::ClusteringAssignment;
using dimple::Matrix;
using dimple::pw_between_cluster;
using dimple::pw_gram;
using dimple::Vector;

namespace {

std::vector<int> canonical(const std::vector<int>& labels) {
  std::vector<int> map(labels.size() + 1, 0);
  std::vector<int> out;
  int next = 0;
  for (int lab : labels) {
    if (map[static_cast<std::size_t>(lab)] == 0) map[static_cast<std::size_t>(lab)] = ++next;
    out.push_back(map[static_cast<std::size_t>(lab)]);
  }
  return out;
}

AdjacencyTensor small_instance(int n, int L, int K, int M, std::uint64_t seed) {
  dimple::GenConfig cfg;
  cfg.n = n;
  cfg.L = L;
  cfg.K = K;
  cfg.M = M;
  cfg.seed = seed;
  return dimple::sample_adjacency(dimple::sample_model(cfg), seed + 1);
}

// labels from the materialized pipeline: stack vec(U_l U_l^T) columns, thin
// SVD, k-means on the rows of the leading right singular vectors
ClusteringAssignment dense_pipeline(const AdjacencyTensor& A, int K, int M, std::uint64_t seed,
                                    int restarts) {
  const int n = A.node_count();
  const int L = A.layer_count();
  Matrix theta(n * n, L);
  for (int l = 0; l < L; ++l) {
    const Matrix U = dimple::top_abs_eigs(A.layer(l), K).U;
    const Matrix proj = U * U.transpose();
    theta.col(l) = Eigen::Map<const Vector>(proj.data(), proj.size());
  }
  Eigen::JacobiSVD<Matrix> svd(theta, Eigen::ComputeThinV);
  const Matrix rows = svd.matrixV().leftCols(M);
  return dimple::kmeans(rows, M, restarts, seed);
}

}  // namespace

TEST_CASE("gram diagonal equals K (projections have Frobenius norm sqrt(K))") {
  const AdjacencyTensor A = small_instance(10, 4, 3, 2, 3);
  const Matrix G = pw_gram(A, 3);
  for (int l = 0; l < 4; ++l) CHECK(G(l, l) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("identical layers give the rank-one constant gram") {
  const AdjacencyTensor one = small_instance(8, 1, 2, 1, 5);
  std::vector<Matrix> copies{one.layer(0), one.layer(0), one.layer(0)};
  const AdjacencyTensor A(copies);
  const Matrix G = pw_gram(A, 2);
  CHECK((G.array() - 2.0).abs().maxCoeff() < 1e-10);
  const ClusteringAssignment labels = pw_between_cluster(A, 2, 1, 9);
  for (int l = 0; l < 3; ++l) CHECK(labels.label(l) == 1);
}

TEST_CASE("gram entries lie in [0, K]") {
  dimple::Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const AdjacencyTensor A = small_instance(9, 5, 3, 2, 100 + trial);
    const Matrix G = pw_gram(A, 3);
    CHECK(G.minCoeff() >= -1e-10);
    CHECK(G.maxCoeff() <= 3.0 + 1e-10);
  }
}

TEST_CASE("gram-trick identity against materialized vectors") {
  const AdjacencyTensor A = small_instance(11, 5, 3, 2, 17);
  const Matrix G = pw_gram(A, 3);
  const int n = A.node_count();
  std::vector<Vector> vecs;
  for (int l = 0; l < 5; ++l) {
    const Matrix U = dimple::top_abs_eigs(A.layer(l), 3).U;
    const Matrix proj = U * U.transpose();
    vecs.push_back(Eigen::Map<const Vector>(proj.data(), static_cast<long>(n) * n));
  }
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(G(i, j) == doctest::Approx(vecs[static_cast<std::size_t>(i)]
                                           .dot(vecs[static_cast<std::size_t>(j)]))
                           .epsilon(1e-10));
}

TEST_CASE("labels match the dense pipeline exactly") {
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 8 + (trial % 3);
    const int L = 4 + (trial % 3);
    const AdjacencyTensor A = small_instance(n, L, 2, 2, 1000 + trial);
    const std::uint64_t seed = 555 + static_cast<std::uint64_t>(trial);
    const ClusteringAssignment fast = pw_between_cluster(A, 2, 2, seed, 10);
    const ClusteringAssignment dense = dense_pipeline(A, 2, 2, seed, 10);
    CHECK(canonical(fast.labels()) == canonical(dense.labels()));
  }
}

TEST_CASE("baseline input validation") {
  const AdjacencyTensor A = small_instance(6, 3, 2, 1, 2);
  CHECK_THROWS_AS(pw_gram(A, 7), dimple::DimensionError);
  CHECK_THROWS_AS(pw_between_cluster(A, 2, 4, 1), dimple::DimensionError);
}
