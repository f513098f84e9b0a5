#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dimple/generator.hpp"
#include "dimple/rng.hpp"

using dimple::AdjacencyTensor;
using dimple::ClusteringAssignment;
using dimple::GenConfig;
using dimple::GroundTruthModel;
using dimple::Matrix;
using dimple::probability_tensor;
using dimple::sample_adjacency;
using dimple::sample_model;

namespace {

GenConfig base_config() {
  GenConfig cfg;
  cfg.n = 12;
  cfg.L = 8;
  cfg.K = 3;
  cfg.M = 2;
  cfg.a = 0.3;
  cfg.b = 0.8;
  cfg.omega = {1.0};
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  GenConfig cfg = base_config();
  CHECK_NOTHROW(cfg.validate());

  SUBCASE("interval") {
    cfg.a = 0.9;
    cfg.b = 0.5;
    CHECK_THROWS_AS(cfg.validate(), dimple::ValidationError);
  }
  SUBCASE("omega positive") {
    cfg.omega = {0.0};
    CHECK_THROWS_AS(cfg.validate(), dimple::ValidationError);
  }
  SUBCASE("omega per layer or shared") {
    cfg.omega = {1.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), dimple::DimensionError);
    cfg.omega.assign(static_cast<std::size_t>(cfg.L), 1.0);
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("pi must sum to one") {
    cfg.pi = {0.5, 0.2, 0.2};
    CHECK_THROWS_AS(cfg.validate(), dimple::ValidationError);
  }
}

TEST_CASE("omega = 1 keeps block entries inside [a, b]") {
  GenConfig cfg = base_config();
  const GroundTruthModel model = sample_model(cfg);
  for (const Matrix& B : model.block_matrices()) {
    CHECK(B.minCoeff() >= cfg.a);
    CHECK(B.maxCoeff() <= cfg.b);
  }
}

TEST_CASE("degenerate interval a = b gives constant blocks") {
  GenConfig cfg = base_config();
  cfg.a = cfg.b = 0.5;
  const GroundTruthModel model = sample_model(cfg);
  for (const Matrix& B : model.block_matrices())
    CHECK((B.array() == 0.5).all());
}

TEST_CASE("fixed seed reproduces the model and adjacency exactly") {
  GenConfig cfg = base_config();
  const GroundTruthModel m1 = sample_model(cfg);
  const GroundTruthModel m2 = sample_model(cfg);
  CHECK(m1.layer_labels().labels() == m2.layer_labels().labels());
  for (int m = 0; m < cfg.M; ++m)
    CHECK(m1.node_labels()[static_cast<std::size_t>(m)].labels() ==
          m2.node_labels()[static_cast<std::size_t>(m)].labels());
  for (int l = 0; l < cfg.L; ++l)
    CHECK(m1.block_matrices()[static_cast<std::size_t>(l)] ==
          m2.block_matrices()[static_cast<std::size_t>(l)]);

  const AdjacencyTensor a1 = sample_adjacency(m1, 99);
  const AdjacencyTensor a2 = sample_adjacency(m2, 99);
  for (int l = 0; l < cfg.L; ++l) CHECK(a1.layer(l) == a2.layer(l));
}

TEST_CASE("probability tensor is a block lookup") {
  SUBCASE("single community broadcasts one probability") {
    Matrix B(1, 1);
    B << 0.37;
    GroundTruthModel model(ClusteringAssignment({1}, 1),
                           {ClusteringAssignment({1, 1}, 1)}, {B});
    const std::vector<Matrix> P = probability_tensor(model);
    CHECK((P[0].array() == 0.37).all());
  }

  SUBCASE("K = n with a permutation labeling permutes B") {
    Matrix B(3, 3);
    B << 0.1, 0.2, 0.3, 0.2, 0.5, 0.6, 0.3, 0.6, 0.9;
    // node i gets community perm[i]
    const std::vector<int> perm{3, 1, 2};
    GroundTruthModel model(ClusteringAssignment({1}, 1),
                           {ClusteringAssignment(perm, 3)}, {B});
    const std::vector<Matrix> P = probability_tensor(model);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(P[0](i, j) == B(perm[static_cast<std::size_t>(i)] - 1,
                              perm[static_cast<std::size_t>(j)] - 1));
  }

  SUBCASE("random small model matches entrywise lookup") {
    GenConfig cfg = base_config();
    cfg.seed = 7;
    const GroundTruthModel model = sample_model(cfg);
    const std::vector<Matrix> P = probability_tensor(model);
    for (int l = 0; l < cfg.L; ++l) {
      const int m = model.layer_labels().label(l) - 1;
      const auto& z = model.node_labels()[static_cast<std::size_t>(m)];
      for (int i = 0; i < cfg.n; ++i)
        for (int j = 0; j < cfg.n; ++j)
          CHECK(P[static_cast<std::size_t>(l)](i, j) ==
                model.block_matrices()[static_cast<std::size_t>(l)](z.label(i) - 1,
                                                                    z.label(j) - 1));
    }
  }
}

TEST_CASE("adjacency sampling extremes") {
  SUBCASE("probability 0 gives the empty graph") {
    Matrix B = Matrix::Zero(1, 1);
    GroundTruthModel model(ClusteringAssignment({1}, 1),
                           {ClusteringAssignment({1, 1, 1, 1}, 1)}, {B});
    const AdjacencyTensor A = sample_adjacency(model, 1);
    CHECK(A.layer(0).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("probability 1 gives the complete graph") {
    Matrix B = Matrix::Ones(1, 1);
    GroundTruthModel model(ClusteringAssignment({1}, 1),
                           {ClusteringAssignment({1, 1, 1, 1, 1}, 1)}, {B});
    const AdjacencyTensor A = sample_adjacency(model, 1);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        CHECK(A.layer(0)(i, j) == (i == j ? 0.0 : 1.0));
  }
}

TEST_CASE("edge count concentrates at p = 1/2") {
  Matrix B(1, 1);
  B << 0.5;
  const int n = 100;
  GroundTruthModel model(ClusteringAssignment({1}, 1),
                         {ClusteringAssignment(std::vector<int>(n, 1), 1)}, {B});
  const AdjacencyTensor A = sample_adjacency(model, 12345);
  const double edges = A.layer(0).sum() / 2.0;
  const double mean = n * (n - 1) / 4.0;                    // 2475
  const double sd = std::sqrt(n * (n - 1) / 2.0 * 0.25);    // ~35.2
  CHECK(std::abs(edges - mean) <= 5.0 * sd);
}

TEST_CASE("layer-group frequencies follow varpi") {
  GenConfig cfg = base_config();
  cfg.M = 3;
  cfg.L = 40;
  cfg.varpi = {0.2, 0.3, 0.5};
  std::vector<double> counts(3, 0.0);
  const int runs = 50;
  for (int s = 0; s < runs; ++s) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(s);
    const GroundTruthModel model = sample_model(cfg);
    for (int c : model.layer_labels().group_sizes()) (void)c;
    const std::vector<int> sizes = model.layer_labels().group_sizes();
    for (int m = 0; m < 3; ++m) counts[static_cast<std::size_t>(m)] += sizes[static_cast<std::size_t>(m)];
  }
  const double total = cfg.L * static_cast<double>(runs);
  double chi2 = 0.0;
  for (int m = 0; m < 3; ++m) {
    const double expected = total * cfg.varpi[static_cast<std::size_t>(m)];
    chi2 += (counts[static_cast<std::size_t>(m)] - expected) *
            (counts[static_cast<std::size_t>(m)] - expected) / expected;
  }
  // df = 2; 30 is far beyond any reasonable quantile, catching only gross bias
  CHECK(chi2 < 30.0);
}

TEST_CASE("clamping") {
  GenConfig cfg = base_config();
  SUBCASE("no-op for [0.3, 0.8] with omega 1.25") {
    cfg.omega = {1.25};
    double max_entry = 0.0;
    for (int s = 0; s < 10; ++s) {
      cfg.seed = static_cast<std::uint64_t>(s);
      const GroundTruthModel model = sample_model(cfg);
      for (const Matrix& B : model.block_matrices()) max_entry = std::max(max_entry, B.maxCoeff());
    }
    CHECK(max_entry <= 1.0);  // 0.8 * 1.25 = 1.0 exactly; clamp never bites
  }
  SUBCASE("larger omega clamps at 1") {
    cfg.omega = {3.0};
    const GroundTruthModel model = sample_model(cfg);
    for (const Matrix& B : model.block_matrices()) {
      CHECK(B.maxCoeff() <= 1.0);
      for (int i = 0; i < cfg.K; ++i) CHECK(B(i, i) <= cfg.b);  // diagonal never scaled
    }
  }
}

TEST_CASE("per-layer omega applies by layer index") {
  GenConfig cfg = base_config();
  cfg.a = cfg.b = 0.4;  // constant baseline makes scaling visible
  cfg.omega.assign(static_cast<std::size_t>(cfg.L), 1.0);
  for (int l = cfg.L / 2; l < cfg.L; ++l) cfg.omega[static_cast<std::size_t>(l)] = 2.0;
  const GroundTruthModel model = sample_model(cfg);
  for (int l = 0; l < cfg.L; ++l) {
    const Matrix& B = model.block_matrices()[static_cast<std::size_t>(l)];
    const double expected_offdiag = l < cfg.L / 2 ? 0.4 : 0.8;
    CHECK(B(0, 1) == expected_offdiag);
    CHECK(B(0, 0) == 0.4);
  }
}

TEST_CASE("infeasible occupancy errors") {
  GenConfig cfg = base_config();
  SUBCASE("n < K") {
    cfg.n = 2;
    CHECK_THROWS_AS(sample_model(cfg), dimple::ValidationError);
  }
  SUBCASE("L < M") {
    cfg.L = 1;
    CHECK_THROWS_AS(sample_model(cfg), dimple::ValidationError);
  }
  SUBCASE("a group with probability zero exhausts resampling") {
    cfg.varpi = {1.0, 0.0};
    CHECK_THROWS_AS(sample_model(cfg), dimple::ValidationError);
  }
}

TEST_CASE("every sampled group and community is occupied") {
  GenConfig cfg = base_config();
  cfg.n = 6;
  cfg.L = 3;
  cfg.K = 3;
  cfg.M = 2;
  for (int s = 0; s < 30; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    const GroundTruthModel model = sample_model(cfg);
    CHECK(model.layer_labels().all_groups_occupied());
    for (const auto& z : model.node_labels()) CHECK(z.all_groups_occupied());
  }
}
