#pragma once

#include <vector>

#include "dimple/core.hpp"

namespace dimple {

/// Exact minimum-cost assignment on a square cost matrix (O(n^3) Hungarian
/// algorithm). Returns the column assigned to each row.
std::vector<int> hungarian_min_assignment(const Matrix& cost);

struct BetweenError {
  double err = 0.0;              // misclassified fraction under the best matching
  std::vector<int> permutation;  // permutation[g-1] = estimated label matched to true g
};

/// Permutation-minimized misclassification rate between two assignments over
/// the same items with the same group count. The matching maximizes the
/// confusion-matrix trace via the Hungarian algorithm, so the result is exact
/// for any M.
BetweenError between_error(const ClusteringAssignment& truth, const ClusteringAssignment& estimate);

struct WithinError {
  double r_wl = 0.0;
  std::vector<int> group_permutation;                   // [m-1] = estimated group for true m
  std::vector<std::vector<int>> community_permutations; // per true group, [k-1] = estimated label
};

/// Average per-group community misclassification, minimized over the group
/// matching and, within each matched pair, over the community matching. Both
/// levels solve exact assignment problems; the nesting computes the joint
/// double minimum because the inner minima are independent across pairs.
WithinError within_error(const std::vector<ClusteringAssignment>& z_true,
                         const std::vector<ClusteringAssignment>& z_hat);

/// Both metrics plus the minimizing permutations, as one record.
struct ErrorReport {
  double err_between = 0.0;
  double r_wl = 0.0;
  std::vector<int> group_permutation;
  std::vector<std::vector<int>> community_permutations;
};

}  // namespace dimple
