#include "dimple/within.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "dimple/linalg.hpp"
#include "dimple/parallel.hpp"
#include "dimple/rng.hpp"

namespace dimple {

Matrix debiased_square(const Matrix& layer) {
  const int n = static_cast<int>(layer.rows());
  if (layer.cols() != n) throw DimensionError("debiased_square: layer not square");
  Matrix G = layer * layer;
  const Vector degrees = layer.rowwise().sum();
  G.diagonal() -= degrees;
  return G;
}

std::vector<Matrix> debiased_squares(const AdjacencyTensor& A) {
  std::vector<Matrix> out(static_cast<std::size_t>(A.layer_count()));
  parallel_for_index(A.layer_count(),
                     [&](int l) { out[static_cast<std::size_t>(l)] = debiased_square(A.layer(l)); });
  return out;
}

std::vector<Matrix> group_average(const std::vector<Matrix>& g_layers,
                                  const ClusteringAssignment& c_hat) {
  if (static_cast<int>(g_layers.size()) != c_hat.size())
    throw DimensionError("group_average: layer count does not match assignment");
  const int M = c_hat.groups();
  const std::vector<int> sizes = c_hat.group_sizes();
  for (int m = 0; m < M; ++m)
    if (sizes[static_cast<std::size_t>(m)] == 0)
      throw ValidationError("group_average: group " + std::to_string(m + 1) + " is empty");

  const auto n = g_layers.front().rows();
  std::vector<Matrix> H(static_cast<std::size_t>(M), Matrix::Zero(n, n));
  for (int l = 0; l < c_hat.size(); ++l)
    H[static_cast<std::size_t>(c_hat.label(l) - 1)] += g_layers[static_cast<std::size_t>(l)];
  for (int m = 0; m < M; ++m)
    H[static_cast<std::size_t>(m)] /= std::sqrt(static_cast<double>(sizes[static_cast<std::size_t>(m)]));
  return H;
}

ClusteringAssignment within_cluster(const Matrix& h_m, int K, std::uint64_t seed,
                                    int kmeans_restarts) {
  if (K > h_m.rows()) throw DimensionError("within_cluster: more communities than nodes");
  const RankKFactors eig = top_abs_eigs(h_m, K);
  return kmeans(eig.U, K, kmeans_restarts, seed);
}

GroupCommunityResult within_pipeline(const AdjacencyTensor& A, const ClusteringAssignment& c_hat,
                                     int K, std::uint64_t seed, int kmeans_restarts) {
  if (c_hat.size() != A.layer_count())
    throw DimensionError("within_pipeline: assignment does not match layer count");
  const std::vector<Matrix> squares = debiased_squares(A);
  std::vector<Matrix> H = group_average(squares, c_hat);
  const int M = c_hat.groups();

  GroupCommunityResult result;
  result.h_hat = std::move(H);
  result.degenerate.assign(static_cast<std::size_t>(M), false);
  std::vector<std::optional<ClusteringAssignment>> z(static_cast<std::size_t>(M));
  const Rng root(seed);
  parallel_for_index(M, [&](int m) {
    const Matrix& Hm = result.h_hat[static_cast<std::size_t>(m)];
    result.degenerate[static_cast<std::size_t>(m)] = Hm.cwiseAbs().maxCoeff() == 0.0;
    z[static_cast<std::size_t>(m)] =
        within_cluster(Hm, K, root.split(static_cast<std::uint64_t>(m)).seed(), kmeans_restarts);
  });
  for (int m = 0; m < M; ++m) result.z_hat.push_back(std::move(*z[static_cast<std::size_t>(m)]));
  return result;
}

}  // namespace dimple
