#pragma once

#include <cstdint>
#include <vector>

#include "dimple/core.hpp"

namespace dimple {

/// Per-group community assignments plus the aggregated matrices they were
/// computed from (kept for diagnostics).
struct GroupCommunityResult {
  std::vector<ClusteringAssignment> z_hat;  // one per group, labels in 1..K
  std::vector<Matrix> h_hat;                // one aggregated n x n matrix per group
  std::vector<bool> degenerate;             // group aggregate was identically zero
};

/// A^2 - diag(A 1): the squared adjacency with the degree diagonal removed.
/// Since diag(A^2) counts degrees exactly, the result has an exactly zero
/// diagonal (all arithmetic is on small integers).
Matrix debiased_square(const Matrix& layer);

/// debiased_square per layer, parallel over layers.
std::vector<Matrix> debiased_squares(const AdjacencyTensor& A);

/// Scaled within-group sums: H_m = L_m^{-1/2} * sum of the group's layers.
/// Every group of c_hat must be occupied.
std::vector<Matrix> group_average(const std::vector<Matrix>& g_layers,
                                  const ClusteringAssignment& c_hat);

/// Clusters the rows of the top-K (by |eigenvalue|) eigenvector block of a
/// symmetric aggregate into K communities.
ClusteringAssignment within_cluster(const Matrix& h_m, int K, std::uint64_t seed,
                                    int kmeans_restarts = 10);

/// Debiased squares -> group averages -> per-group spectral clustering.
/// Groups run in parallel; deterministic given the seed.
GroupCommunityResult within_pipeline(const AdjacencyTensor& A, const ClusteringAssignment& c_hat,
                                     int K, std::uint64_t seed, int kmeans_restarts = 10);

}  // namespace dimple
