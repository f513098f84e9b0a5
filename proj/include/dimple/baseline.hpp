#pragma once

#include <cstdint>

#include "dimple/core.hpp"

namespace dimple {

/// Gram matrix of the vectorized rank-K spectral projections of the layers:
/// entry (l1, l2) = |U_l1^T U_l2|_F^2 where U_l is the top-K eigenvector
/// block of layer l. Equals the inner products of the n^2-dimensional
/// vec(U_l U_l^T) columns without materializing them.
Matrix pw_gram(const AdjacencyTensor& A, int K);

/// Spectral between-layer baseline: clusters the rows of the top-M
/// eigenvector block of pw_gram (the right singular vectors of the stacked
/// projection matrix) with seeded k-means.
ClusteringAssignment pw_between_cluster(const AdjacencyTensor& A, int K, int M,
                                        std::uint64_t seed, int kmeans_restarts = 10);

}  // namespace dimple
