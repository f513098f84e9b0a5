#include "dimple/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace dimple {

std::vector<int> hungarian_min_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DimensionError("hungarian_min_assignment: cost matrix not square");
  if (n == 0) return {};

  const double inf = std::numeric_limits<double>::infinity();
  // shortest augmenting paths with potentials, 1-based with column 0 as slack
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    assignment[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return assignment;
}

namespace {

// counts(t, e) = #{items with true label t+1 and estimated label e+1}
Matrix confusion_counts(const ClusteringAssignment& truth, const ClusteringAssignment& estimate) {
  Matrix counts = Matrix::Zero(truth.groups(), estimate.groups());
  for (int i = 0; i < truth.size(); ++i)
    counts(truth.label(i) - 1, estimate.label(i) - 1) += 1.0;
  return counts;
}

}  // namespace

BetweenError between_error(const ClusteringAssignment& truth,
                           const ClusteringAssignment& estimate) {
  if (truth.size() != estimate.size())
    throw DimensionError("between_error: assignments differ in length");
  if (truth.groups() != estimate.groups())
    throw DimensionError("between_error: assignments differ in group count");
  const int L = truth.size();
  const Matrix counts = confusion_counts(truth, estimate);
  const std::vector<int> match = hungarian_min_assignment(-counts);

  double agreed = 0.0;
  BetweenError out;
  out.permutation.resize(static_cast<std::size_t>(truth.groups()));
  for (int g = 0; g < truth.groups(); ++g) {
    agreed += counts(g, match[static_cast<std::size_t>(g)]);
    out.permutation[static_cast<std::size_t>(g)] = match[static_cast<std::size_t>(g)] + 1;
  }
  // each mismatched item contributes exactly 2 to |C_hat - C P|_F^2, so the
  // (2L)^-1 normalization reduces to a mismatch fraction
  out.err = (L - agreed) / static_cast<double>(L);
  return out;
}

WithinError within_error(const std::vector<ClusteringAssignment>& z_true,
                         const std::vector<ClusteringAssignment>& z_hat) {
  const int M = static_cast<int>(z_true.size());
  if (M == 0) throw ValidationError("within_error: no groups");
  if (static_cast<int>(z_hat.size()) != M)
    throw DimensionError("within_error: group counts differ");
  const int n = z_true.front().size();
  const int K = z_true.front().groups();
  for (const auto& z : z_true)
    if (z.size() != n || z.groups() != K)
      throw DimensionError("within_error: inconsistent true assignments");
  for (const auto& z : z_hat)
    if (z.size() != n || z.groups() != K)
      throw DimensionError("within_error: inconsistent estimated assignments");

  // inner matching per (true group, estimated group) pair
  Matrix inner_cost(M, M);
  std::vector<std::vector<std::vector<int>>> inner_perm(
      static_cast<std::size_t>(M), std::vector<std::vector<int>>(static_cast<std::size_t>(M)));
  for (int t = 0; t < M; ++t)
    for (int e = 0; e < M; ++e) {
      const Matrix counts =
          confusion_counts(z_true[static_cast<std::size_t>(t)], z_hat[static_cast<std::size_t>(e)]);
      const std::vector<int> match = hungarian_min_assignment(-counts);
      double agreed = 0.0;
      std::vector<int> perm(static_cast<std::size_t>(K));
      for (int k = 0; k < K; ++k) {
        agreed += counts(k, match[static_cast<std::size_t>(k)]);
        perm[static_cast<std::size_t>(k)] = match[static_cast<std::size_t>(k)] + 1;
      }
      inner_cost(t, e) = (n - agreed) / static_cast<double>(n);
      inner_perm[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = std::move(perm);
    }

  const std::vector<int> outer = hungarian_min_assignment(inner_cost);
  WithinError out;
  out.group_permutation.resize(static_cast<std::size_t>(M));
  out.community_permutations.resize(static_cast<std::size_t>(M));
  double total = 0.0;
  for (int t = 0; t < M; ++t) {
    const int e = outer[static_cast<std::size_t>(t)];
    total += inner_cost(t, e);
    out.group_permutation[static_cast<std::size_t>(t)] = e + 1;
    out.community_permutations[static_cast<std::size_t>(t)] =
        inner_perm[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)];
  }
  out.r_wl = total / static_cast<double>(M);
  return out;
}

}  // namespace dimple
