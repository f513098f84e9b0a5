#include "dimple/baseline.hpp"

#include <utility>
#include <vector>

#include "dimple/linalg.hpp"
#include "dimple/parallel.hpp"

namespace dimple {

Matrix pw_gram(const AdjacencyTensor& A, int K) {
  const int L = A.layer_count();
  if (K < 1 || K > A.node_count()) throw DimensionError("pw_gram: K outside [1, n]");

  std::vector<Matrix> bases(static_cast<std::size_t>(L));
  parallel_for_index(L, [&](int l) {
    bases[static_cast<std::size_t>(l)] = top_abs_eigs(A.layer(l), K).U;
  });

  Matrix G(L, L);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(L) * (L + 1) / 2);
  for (int i = 0; i < L; ++i)
    for (int j = i; j < L; ++j) pairs.emplace_back(i, j);
  parallel_for_index(static_cast<int>(pairs.size()), [&](int p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    const double v = (bases[static_cast<std::size_t>(i)].transpose() *
                      bases[static_cast<std::size_t>(j)])
                         .squaredNorm();
    G(i, j) = v;
    G(j, i) = v;
  });
  return G;
}

ClusteringAssignment pw_between_cluster(const AdjacencyTensor& A, int K, int M,
                                        std::uint64_t seed, int kmeans_restarts) {
  const int L = A.layer_count();
  if (M < 1 || M > L) throw DimensionError("pw_between_cluster: M outside [1, L]");
  const Matrix G = pw_gram(A, K);
  // The eigenvectors of the L x L Gram are the right singular vectors of the
  // stacked n^2 x L projection matrix, which never needs to exist.
  const RankKFactors eig = top_abs_eigs(G, M);
  return kmeans(eig.U, M, kmeans_restarts, seed);
}

}  // namespace dimple
