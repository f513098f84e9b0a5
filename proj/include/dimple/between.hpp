#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "dimple/core.hpp"
#include "dimple/lasso.hpp"

namespace dimple {

/// Self-representation weights W (columns are per-layer LASSO solutions,
/// zero diagonal) and the symmetrized affinity |W| + |W^T|.
struct WeightMatrix {
  Matrix W;
  Matrix W_sym;
};

/// Solves the LASSO for every column, in parallel, and symmetrizes.
WeightMatrix weight_matrix(const GramMatrix& G_norm, double lambda,
                           const LassoOptions& opt = {});

/// Spectral clustering on an affinity matrix: k-means over the rows of the M
/// eigenvectors of the unnormalized Laplacian D - W_sym with smallest
/// eigenvalues.
ClusteringAssignment spectral_cluster_affinity(const Matrix& W_sym, int M, std::uint64_t seed,
                                               int kmeans_restarts = 10);

struct Components {
  int count = 0;
  ClusteringAssignment labels;  // 1..count, numbered by smallest member index
};

/// Connected components of the graph with an edge wherever W_sym exceeds
/// edge_eps (guards float dust; coordinate descent yields exact zeros).
Components connected_components(const Matrix& W_sym, double edge_eps = 1e-10);

/// Largest-gap threshold over the off-diagonal entries of the component
/// affinity: midpoint of the widest gap in sorted order. If all entries are
/// equal there is no gap to exploit; returns that value + 1e-9 (which forces
/// the identity thresholded matrix) and sets *all_equal when provided.
double default_threshold(const Matrix& upsilon_tilde, bool* all_equal = nullptr);

/// Diagnostics of the component-merging step (and of the decision not to
/// merge). upsilon_tilde / g_hat / component_groups are filled only when the
/// merge path ran.
struct MergeReport {
  MergeReport(int m_tilde_count, ClusteringAssignment component_labels)
      : m_tilde(m_tilde_count), components(std::move(component_labels)) {}

  int m_tilde;
  ClusteringAssignment components;  // phi: layer -> component
  bool merged = false;
  Matrix upsilon_tilde;  // M~ x M~ averaged |Gram| between components
  double threshold_used = std::numeric_limits<double>::quiet_NaN();
  Matrix g_hat;  // thresholded binary component affinity
  std::optional<ClusteringAssignment> component_groups;  // theta: component -> group
  bool low_confidence = false;
  std::string note;
};

struct MergeOutcome {
  MergeReport report;
  ClusteringAssignment labels;  // final layer -> group, theta(phi(l))
};

/// Merges M~ >= M components into M groups: averages |Gram| between
/// components, thresholds it into a binary affinity, and clusters the rows of
/// its top-M eigenvector block. A threshold that leaves no off-diagonal
/// survivors gives an arbitrary merge and is flagged low-confidence.
MergeOutcome merge_components(const GramMatrix& G_norm, const Components& components, int M,
                              std::optional<double> threshold, std::uint64_t seed,
                              int kmeans_restarts = 10);

struct BetweenOptions {
  std::optional<double> lambda;     // default: 4 * mean_abs_entry
  std::optional<double> threshold;  // default: largest-gap heuristic
  int kmeans_restarts = 10;
  LassoOptions lasso;
  double edge_eps = 1e-10;
};

struct BetweenResult {
  ClusteringAssignment labels;
  MergeReport report;
  double lambda_used = 0.0;
};

/// Full between-layer pipeline: embed, normalized Gram, weight matrix,
/// spectral clustering; if the affinity graph splits into more than M
/// components, the merge step produces the final labels instead. Errors from
/// any stage are rethrown as PipelineError tagged with the stage name.
BetweenResult between_layer_cluster(const AdjacencyTensor& A, int K, int M,
                                    const BetweenOptions& opt, std::uint64_t seed);

}  // namespace dimple
