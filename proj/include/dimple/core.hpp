#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dimple {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Invalid arguments or data that violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between related objects.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Failure inside a multi-stage pipeline, tagged with the stage name.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// A partition of N items into G groups, stored as 1-based labels.
///
/// Groups may be empty (k-means needs that transiently); operations that
/// require occupied groups check for themselves.
class ClusteringAssignment {
 public:
  ClusteringAssignment(std::vector<int> labels, int group_count);

  int size() const { return static_cast<int>(labels_.size()); }
  int groups() const { return groups_; }
  int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

  /// N x G binary matrix with a single 1 per row, in column label(i)-1.
  Matrix membership_matrix() const;

  /// Item count per group, indexed by group-1; sums to size().
  std::vector<int> group_sizes() const;

  /// Item indices per group, indexed by group-1.
  std::vector<std::vector<int>> group_members() const;

  bool all_groups_occupied() const;

  bool operator==(const ClusteringAssignment& other) const = default;

 private:
  std::vector<int> labels_;
  int groups_ = 0;
};

/// L symmetric binary n x n layers with zero diagonals. Immutable.
class AdjacencyTensor {
 public:
  explicit AdjacencyTensor(std::vector<Matrix> layers);

  int node_count() const { return n_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const Matrix& layer(int l) const { return layers_[static_cast<std::size_t>(l)]; }
  const std::vector<Matrix>& layers() const { return layers_; }

 private:
  std::vector<Matrix> layers_;
  int n_ = 0;
};

/// Full description of a sampled multiplex model: which group each layer
/// belongs to, the node communities per group, and the per-layer block
/// probability matrices.
class GroundTruthModel {
 public:
  GroundTruthModel(ClusteringAssignment layer_labels,
                   std::vector<ClusteringAssignment> node_labels,
                   std::vector<Matrix> block_matrices);

  const ClusteringAssignment& layer_labels() const { return layer_labels_; }
  const std::vector<ClusteringAssignment>& node_labels() const { return node_labels_; }
  const std::vector<Matrix>& block_matrices() const { return block_matrices_; }

  int layer_count() const { return layer_labels_.size(); }
  int group_count() const { return layer_labels_.groups(); }
  int node_count() const { return node_labels_.front().size(); }
  int community_count() const { return node_labels_.front().groups(); }

 private:
  ClusteringAssignment layer_labels_;
  std::vector<ClusteringAssignment> node_labels_;
  std::vector<Matrix> block_matrices_;
};

/// Symmetric positive-semidefinite (up to tolerance) inner-product matrix.
class GramMatrix {
 public:
  explicit GramMatrix(Matrix entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

}  // namespace dimple
