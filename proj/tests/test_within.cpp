#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dimple/generator.hpp"
#include "dimple/metrics.hpp"
#include "dimple/rng.hpp"
#include "dimple/within.hpp"

using dimple::AdjacencyTensor;
using dimple::ClusteringAssignment;
using dimple::debiased_square;
using dimple::debiased_squares;
using dimple::group_average;
using dimple::GroupCommunityResult;
using dimple::Matrix;
using dimple::Vector;
using dimple::within_cluster;
using dimple::within_pipeline;

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

AdjacencyTensor random_tensor(int n, int L, std::uint64_t seed, double p = 0.4) {
  dimple::Rng rng(seed);
  std::vector<Matrix> layers;
  for (int l = 0; l < L; ++l) {
    Matrix A = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j)
        if (rng.bernoulli(p)) A(i, j) = A(j, i) = 1.0;
    layers.push_back(std::move(A));
  }
  return AdjacencyTensor(std::move(layers));
}

}  // namespace

TEST_CASE("debiased_square hand cases") {
  SUBCASE("zero matrix") {
    CHECK(debiased_square(Matrix::Zero(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single edge cancels exactly") {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 1) = A(1, 0) = 1.0;
    CHECK(debiased_square(A).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("path graph keeps the two-hop entry") {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 1) = A(1, 0) = 1.0;
    A(1, 2) = A(2, 1) = 1.0;
    const Matrix G = debiased_square(A);
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 2) = expected(2, 0) = 1.0;
    CHECK(G == expected);
  }
}

TEST_CASE("debiased_square has an exactly zero diagonal on random graphs") {
  const AdjacencyTensor A = random_tensor(15, 6, 3);
  for (const Matrix& G : debiased_squares(A)) {
    for (int i = 0; i < 15; ++i) CHECK(G(i, i) == 0.0);
    CHECK((G - G.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("group_average") {
  const AdjacencyTensor A = random_tensor(8, 4, 9);
  const std::vector<Matrix> G = debiased_squares(A);

  SUBCASE("single group sums everything over sqrt(L)") {
    const auto H = group_average(G, ClusteringAssignment({1, 1, 1, 1}, 1));
    Matrix expected = Matrix::Zero(8, 8);
    for (const auto& g : G) expected += g;
    expected /= std::sqrt(4.0);
    CHECK((H[0] - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("singleton groups pass layers through") {
    const auto H = group_average(G, ClusteringAssignment({1, 2, 3, 4}, 4));
    for (int m = 0; m < 4; ++m)
      CHECK(H[static_cast<std::size_t>(m)] == G[static_cast<std::size_t>(m)]);
  }

  SUBCASE("matches the explicit scaled-membership contraction") {
    const ClusteringAssignment c({1, 2, 1, 2}, 2);
    const auto H = group_average(G, c);
    // Psi = C (C^T C)^{-1/2}; H_m = sum_l Psi(l, m) G_l
    const Matrix C = c.membership_matrix();
    const Matrix scale = (C.transpose() * C).diagonal().cwiseSqrt().cwiseInverse().asDiagonal();
    const Matrix psi = C * scale;
    for (int m = 0; m < 2; ++m) {
      Matrix expected = Matrix::Zero(8, 8);
      for (int l = 0; l < 4; ++l) expected += psi(l, m) * G[static_cast<std::size_t>(l)];
      CHECK((H[static_cast<std::size_t>(m)] - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("empty group is an error") {
    CHECK_THROWS_AS(group_average(G, ClusteringAssignment({1, 1, 1, 1}, 2)),
                    dimple::ValidationError);
  }

  SUBCASE("layer order within groups does not matter") {
    const auto H1 = group_average(G, ClusteringAssignment({1, 2, 1, 2}, 2));
    std::vector<Matrix> reordered{G[2], G[3], G[0], G[1]};
    const auto H2 = group_average(reordered, ClusteringAssignment({1, 2, 1, 2}, 2));
    for (int m = 0; m < 2; ++m)
      CHECK(H1[static_cast<std::size_t>(m)] == H2[static_cast<std::size_t>(m)]);
  }
}

TEST_CASE("within_cluster on noiseless block structure") {
  // planted two-block matrix with a clear spectral gap
  const int n = 40;
  std::vector<int> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = i < n / 2 ? 1 : 2;
  Matrix B(2, 2);
  B << 0.8, 0.2, 0.2, 0.7;
  Matrix P(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      P(i, j) = B(z[static_cast<std::size_t>(i)] - 1, z[static_cast<std::size_t>(j)] - 1);

  SUBCASE("probability matrix itself") {
    const ClusteringAssignment a = within_cluster(P, 2, 5);
    CHECK(canonical(a.labels()) == canonical(z));
  }
  SUBCASE("debiased square analog of the noiseless matrix") {
    Matrix G = P * P;
    G.diagonal() -= P.rowwise().sum();
    const ClusteringAssignment a = within_cluster(G, 2, 5);
    CHECK(canonical(a.labels()) == canonical(z));
  }
}

TEST_CASE("within_cluster with n = K separates all nodes") {
  Matrix H(3, 3);
  H << 5, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  const ClusteringAssignment a = within_cluster(H, 3, 1);
  CHECK(a.all_groups_occupied());
}

TEST_CASE("zero aggregate is degenerate but deterministic") {
  std::vector<Matrix> zeros{Matrix::Zero(6, 6), Matrix::Zero(6, 6)};
  const AdjacencyTensor A(zeros);
  const GroupCommunityResult r = within_pipeline(A, ClusteringAssignment({1, 1}, 1), 2, 4);
  CHECK(r.degenerate[0]);
  const GroupCommunityResult r2 = within_pipeline(A, ClusteringAssignment({1, 1}, 1), 2, 4);
  CHECK(r.z_hat[0].labels() == r2.z_hat[0].labels());
}

TEST_CASE("noiseless per-group pipeline recovers communities exactly") {
  // planted well-conditioned blocks; near-singular B has no community signal
  dimple::Rng rng(21);
  Matrix B(2, 2);
  B << 0.8, 0.3, 0.3, 0.6;
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 30;
    std::vector<int> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 2;
    z[0] = 1;
    z[1] = 2;  // both communities occupied
    const dimple::GroundTruthModel model(ClusteringAssignment({1}, 1),
                                         {ClusteringAssignment(z, 2)}, {B});
    const Matrix P = dimple::probability_tensor(model)[0];
    Matrix G = P * P;
    G.diagonal() -= P.rowwise().sum();
    const ClusteringAssignment a = within_cluster(G, 2, 11);
    CHECK(canonical(a.labels()) == canonical(z));
  }
}

TEST_CASE("pipeline reduction: M = 1 equals direct single-group clustering") {
  const AdjacencyTensor A = random_tensor(12, 3, 77);
  const ClusteringAssignment all_one({1, 1, 1}, 1);
  const GroupCommunityResult piped = within_pipeline(A, all_one, 2, 123);

  const auto G = debiased_squares(A);
  const auto H = group_average(G, all_one);
  const ClusteringAssignment direct =
      within_cluster(H[0], 2, dimple::Rng(123).split(0).seed());
  CHECK(piped.z_hat[0].labels() == direct.labels());
}

TEST_CASE("true layer groups give near-exact communities at moderate size") {
  dimple::GenConfig cfg;
  cfg.n = 200;
  cfg.L = 16;
  cfg.K = 3;
  cfg.M = 2;
  cfg.omega = {1.25};
  double total = 0.0;
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = 400 + static_cast<std::uint64_t>(s);
    const auto model = dimple::sample_model(cfg);
    const auto A = dimple::sample_adjacency(model, 900 + static_cast<std::uint64_t>(s));
    const GroupCommunityResult r =
        within_pipeline(A, model.layer_labels(), cfg.K, 31 + static_cast<std::uint64_t>(s));
    total += dimple::within_error(model.node_labels(), r.z_hat).r_wl;
  }
  CHECK(total / seeds <= 0.02);
}

TEST_CASE("within input validation") {
  const AdjacencyTensor A = random_tensor(6, 2, 5);
  CHECK_THROWS_AS(within_pipeline(A, ClusteringAssignment({1, 1, 1}, 1), 2, 0),
                  dimple::DimensionError);
  CHECK_THROWS_AS(within_cluster(Matrix::Zero(3, 3), 4, 0), dimple::DimensionError);
}
