#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dimple/embed.hpp"
#include "dimple/generator.hpp"
#include "dimple/lasso.hpp"
#include "dimple/rng.hpp"

using dimple::default_lambda;
using dimple::GramMatrix;
using dimple::kkt_residual;
using dimple::LassoOptions;
using dimple::LassoSolution;
using dimple::Matrix;
using dimple::solve_column;
using dimple::Vector;

namespace {

// independent dense-data solver: coordinate descent on the columns of Y
// themselves, maintaining the explicit residual vector
Vector dense_lasso(const Matrix& Y, int target, double lambda, double tol = 1e-10,
                   int max_sweeps = 200000) {
  const int L = static_cast<int>(Y.cols());
  Vector w = Vector::Zero(L);
  Vector residual = Y.col(target);  // y - Y w
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (int j = 0; j < L; ++j) {
      if (j == target) continue;
      const double cj = Y.col(j).squaredNorm();
      if (cj <= 0.0) continue;
      const double rho = Y.col(j).dot(residual) + cj * w(j);
      double wj = 0.0;
      if (rho > lambda)
        wj = (rho - lambda) / cj;
      else if (rho < -lambda)
        wj = (rho + lambda) / cj;
      if (wj != w(j)) {
        residual += Y.col(j) * (w(j) - wj);
        max_delta = std::max(max_delta, std::abs(wj - w(j)));
        w(j) = wj;
      }
    }
    if (max_delta < tol) break;
  }
  return w;
}

GramMatrix gram_of(const Matrix& Y) {
  Matrix G = Y.transpose() * Y;
  G = 0.5 * (G + G.transpose());
  return GramMatrix(std::move(G));
}

// random matrix with unit-norm columns
Matrix random_unit_columns(int rows, int cols, dimple::Rng& rng) {
  Matrix Y(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) Y(i, j) = rng.next_double() - 0.5;
    Y.col(j).normalize();
  }
  return Y;
}

}  // namespace

TEST_CASE("penalty above the dual norm kills every coordinate") {
  dimple::Rng rng(3);
  const Matrix Y = random_unit_columns(12, 5, rng);
  const GramMatrix G = gram_of(Y);
  const int target = 2;
  double max_corr = 0.0;
  for (int j = 0; j < 5; ++j)
    if (j != target) max_corr = std::max(max_corr, std::abs(G(j, target)));

  const LassoSolution sol = solve_column(G, target, max_corr + 0.01, {});
  CHECK(sol.w.cwiseAbs().maxCoeff() == 0.0);
  CHECK(sol.kkt_residual == 0.0);
  CHECK(sol.converged);
}

TEST_CASE("two-column closed form: w = sign(g) (|g| - lambda)") {
  for (double g : {0.8, -0.8}) {
    Matrix Gm(2, 2);
    Gm << 1, g, g, 1;
    const LassoSolution sol = solve_column(GramMatrix{Gm}, 0, 0.3, {});
    const double expected = (g > 0 ? 1.0 : -1.0) * (std::abs(g) - 0.3);
    CHECK(sol.w(1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sol.w(0) == 0.0);
  }
}

TEST_CASE("duplicate column at vanishing penalty: exact representation") {
  Matrix Gm(2, 2);
  Gm << 1, 1, 1, 1;  // identical unit vectors
  const double lambda = 1e-6;
  const LassoSolution sol = solve_column(GramMatrix{Gm}, 0, lambda, {});
  CHECK(sol.w(1) == doctest::Approx(1.0 - lambda).epsilon(1e-12));
  CHECK(sol.w.lpNorm<1>() == doctest::Approx(1.0 - lambda).epsilon(1e-10));
  // objective (1-w)^2 + 2 lambda w at w = 1 - lambda equals 2 lambda - lambda^2
  CHECK(sol.objective == doctest::Approx(2 * lambda - lambda * lambda).epsilon(1e-9));
}

TEST_CASE("kkt_residual certificate") {
  Matrix Gm(2, 2);
  Gm << 1, 0.8, 0.8, 1;
  const GramMatrix G{Gm};

  SUBCASE("zero at the exact minimizer") {
    Vector w(2);
    w << 0.0, 0.5;  // soft-threshold solution for lambda = 0.3
    CHECK(kkt_residual(G, 0, 0.3, w) <= 1e-12);
  }
  SUBCASE("zero for w = 0 under a large penalty") {
    CHECK(kkt_residual(G, 0, 0.9, Vector::Zero(2)) == 0.0);
  }
  SUBCASE("perturbing a support coordinate by 1e-3 moves the residual by 2e-3") {
    Vector w(2);
    w << 0.0, 0.5 + 1e-3;
    CHECK(kkt_residual(G, 0, 0.3, w) == doctest::Approx(2e-3).epsilon(1e-9));
  }
  SUBCASE("nonzero target weight is rejected") {
    Vector w(2);
    w << 0.1, 0.0;
    CHECK_THROWS_AS(kkt_residual(G, 0, 0.3, w), dimple::ValidationError);
  }
}

TEST_CASE("all returned solutions satisfy the KKT tolerance") {
  dimple::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int L = 4 + static_cast<int>(rng.next_double() * 5);
    const Matrix Y = random_unit_columns(15, L, rng);
    const GramMatrix G = gram_of(Y);
    for (int target = 0; target < L; ++target) {
      const LassoSolution sol = solve_column(G, target, 0.05 + 0.3 * rng.next_double(), {});
      CHECK(sol.kkt_residual <= 1e-6);
      CHECK(sol.w(target) == 0.0);
    }
  }
}

TEST_CASE("Gram solve equals dense solve on materialized data") {
  dimple::Rng rng(29);
  // both routes iterate to near-exact optimality so the comparison tests the
  // problem equivalence, not the stopping rule
  LassoOptions tight;
  tight.tol = 1e-12;
  tight.kkt_tol = 1e-10;
  for (int trial = 0; trial < 10; ++trial) {
    const int L = 4 + static_cast<int>(rng.next_double() * 4);
    const int D = 10 + static_cast<int>(rng.next_double() * 30);
    const Matrix Y = random_unit_columns(D, L, rng);
    const GramMatrix G = gram_of(Y);
    const double lambda = 0.02 + 0.2 * rng.next_double();
    for (int target = 0; target < L; ++target) {
      const Vector via_gram = solve_column(G, target, lambda, tight).w;
      const Vector via_dense = dense_lasso(Y, target, lambda, 1e-12);
      CHECK((via_gram - via_dense).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("l1 norm is nonincreasing along an increasing lambda grid") {
  dimple::Rng rng(37);
  const Matrix Y = random_unit_columns(20, 7, rng);
  const GramMatrix G = gram_of(Y);
  for (int target = 0; target < 7; ++target) {
    double prev = 1e300;
    for (double lambda = 0.02; lambda < 0.6; lambda *= 1.6) {
      const double l1 = solve_column(G, target, lambda, {}).w.lpNorm<1>();
      CHECK(l1 <= prev + 1e-9);
      prev = l1;
    }
  }
}

TEST_CASE("non-convergence carries the best iterate and target") {
  Matrix Gm(3, 3);
  Gm << 1, 0.9, 0.5, 0.9, 1, 0.4, 0.5, 0.4, 1;
  LassoOptions opt;
  opt.max_sweeps = 1;
  opt.tol = 1e-16;  // unreachable in one sweep
  try {
    solve_column(GramMatrix{Gm}, 0, 0.01, opt);
    FAIL("expected SolverError");
  } catch (const dimple::SolverError& e) {
    CHECK(e.target_index == 0);
    CHECK_FALSE(e.best.converged);
    CHECK(e.best.w.size() == 3);
    CHECK(e.best.w(0) == 0.0);
  }
}

TEST_CASE("solver input validation") {
  Matrix Gm = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(solve_column(GramMatrix{Gm}, 3, 0.1, {}), dimple::DimensionError);
  CHECK_THROWS_AS(solve_column(GramMatrix{Gm}, 0, 0.0, {}), dimple::ValidationError);
}

TEST_CASE("default_lambda") {
  SUBCASE("four times the mean absolute entry") {
    Matrix S(2, 2);
    S << 1, -1, -1, 1;  // mean |entry| of the embedding is 1
    const auto e = dimple::embed_layer(S, 2);
    CHECK(default_lambda({e}) == doctest::Approx(4.0).epsilon(1e-12));
  }

  SUBCASE("zero for all-zero embeddings") {
    const auto e = dimple::embed_layer(Matrix::Zero(4, 4), 2);
    CHECK(default_lambda({e}) == 0.0);
    CHECK_THROWS_AS(solve_column(GramMatrix{Matrix::Identity(2, 2)}, 0, default_lambda({e}), {}),
                    dimple::ValidationError);
  }

  SUBCASE("simulation-protocol instance matches the dense average") {
    dimple::GenConfig cfg;
    cfg.n = 100;
    cfg.L = 8;
    cfg.K = 3;
    cfg.M = 2;
    cfg.a = 0.3;
    cfg.b = 0.8;
    cfg.omega = {0.95};
    cfg.seed = 4242;
    const auto model = dimple::sample_model(cfg);
    const auto A = dimple::sample_adjacency(model, 77);
    const auto emb = dimple::embed_layers(A, cfg.K);

    double dense = 0.0;
    for (const auto& e : emb) dense += e.factors.reconstruct().cwiseAbs().sum();
    dense /= static_cast<double>(cfg.n) * cfg.n * cfg.L;
    CHECK(default_lambda(emb) == doctest::Approx(4.0 * dense).epsilon(1e-12));
    CHECK(default_lambda(emb) > 0.0);
  }
}
