#pragma once

#include <cstdint>

#include "dimple/core.hpp"

namespace dimple {

/// Truncated eigendecomposition of a symmetric matrix: U has orthonormal
/// columns, s holds the (signed) eigenvalues ordered by descending |value|.
struct RankKFactors {
  Matrix U;
  Vector s;

  Matrix reconstruct() const { return U * s.asDiagonal() * U.transpose(); }
};

/// The r eigenpairs of symmetric S with largest |eigenvalue|. This is the
/// best rank-r approximation in Frobenius norm; selection is by absolute
/// value because centered adjacency matrices carry meaningful negative
/// spectrum (disassortative layers).
RankKFactors top_abs_eigs(const Matrix& S, int r);

/// U diag(s) U^T from top_abs_eigs(S, r).
Matrix rank_k_project(const Matrix& S, int r);

/// Seeded k-means over the rows of `points`: kmeans++ initialization, Lloyd
/// iterations to convergence (max center movement < 1e-9) or 300 rounds,
/// best of `restarts` runs. Deterministic given the seed: ties in seeding
/// and assignment break toward the lowest index, and the winning restart is
/// the lexicographic minimum of (cost, restart index). Returned labels are
/// 1-based and every cluster is occupied.
ClusteringAssignment kmeans(const Matrix& points, int G, int restarts, std::uint64_t seed);

/// Within-cluster sum of squared distances to the centroid of each group.
double kmeans_cost(const Matrix& points, const ClusteringAssignment& assignment);

}  // namespace dimple
