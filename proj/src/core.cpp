#include "dimple/core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace dimple {

ClusteringAssignment::ClusteringAssignment(std::vector<int> labels, int group_count)
    : labels_(std::move(labels)), groups_(group_count) {
  if (groups_ < 1) throw ValidationError("ClusteringAssignment: group count must be >= 1");
  if (labels_.empty()) throw ValidationError("ClusteringAssignment: empty label vector");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 1 || labels_[i] > groups_)
      throw ValidationError("ClusteringAssignment: label " + std::to_string(labels_[i]) +
                            " at position " + std::to_string(i) + " outside [1, " +
                            std::to_string(groups_) + "]");
  }
}

Matrix ClusteringAssignment::membership_matrix() const {
  Matrix Z = Matrix::Zero(size(), groups_);
  for (int i = 0; i < size(); ++i) Z(i, labels_[static_cast<std::size_t>(i)] - 1) = 1.0;
  return Z;
}

std::vector<int> ClusteringAssignment::group_sizes() const {
  std::vector<int> counts(static_cast<std::size_t>(groups_), 0);
  for (int lab : labels_) ++counts[static_cast<std::size_t>(lab - 1)];
  return counts;
}

std::vector<std::vector<int>> ClusteringAssignment::group_members() const {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(groups_));
  for (int i = 0; i < size(); ++i)
    members[static_cast<std::size_t>(labels_[static_cast<std::size_t>(i)] - 1)].push_back(i);
  return members;
}

bool ClusteringAssignment::all_groups_occupied() const {
  for (int c : group_sizes())
    if (c == 0) return false;
  return true;
}

AdjacencyTensor::AdjacencyTensor(std::vector<Matrix> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ValidationError("AdjacencyTensor: no layers");
  n_ = static_cast<int>(layers_.front().rows());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Matrix& A = layers_[l];
    const std::string tag = "AdjacencyTensor: layer " + std::to_string(l);
    if (A.rows() != n_ || A.cols() != n_) throw DimensionError(tag + " is not n x n");
    for (int i = 0; i < n_; ++i) {
      if (A(i, i) != 0.0) throw ValidationError(tag + " has a nonzero diagonal entry");
      for (int j = 0; j < i; ++j) {
        const double v = A(i, j);
        if (v != 0.0 && v != 1.0) throw ValidationError(tag + " has a non-binary entry");
        if (v != A(j, i)) throw ValidationError(tag + " is not symmetric");
      }
    }
  }
}

GroundTruthModel::GroundTruthModel(ClusteringAssignment layer_labels,
                                   std::vector<ClusteringAssignment> node_labels,
                                   std::vector<Matrix> block_matrices)
    : layer_labels_(std::move(layer_labels)),
      node_labels_(std::move(node_labels)),
      block_matrices_(std::move(block_matrices)) {
  const int M = layer_labels_.groups();
  const int L = layer_labels_.size();
  if (static_cast<int>(node_labels_.size()) != M)
    throw DimensionError("GroundTruthModel: need one node labeling per layer group");
  if (static_cast<int>(block_matrices_.size()) != L)
    throw DimensionError("GroundTruthModel: need one block matrix per layer");
  const int n = node_labels_.front().size();
  const int K = node_labels_.front().groups();
  for (const auto& z : node_labels_) {
    if (z.size() != n) throw DimensionError("GroundTruthModel: node labelings disagree on n");
    if (z.groups() != K) throw DimensionError("GroundTruthModel: node labelings disagree on K");
  }
  for (std::size_t l = 0; l < block_matrices_.size(); ++l) {
    const Matrix& B = block_matrices_[l];
    const std::string tag = "GroundTruthModel: block matrix " + std::to_string(l);
    if (B.rows() != K || B.cols() != K) throw DimensionError(tag + " is not K x K");
    for (int i = 0; i < K; ++i)
      for (int j = 0; j <= i; ++j) {
        if (B(i, j) != B(j, i)) throw ValidationError(tag + " is not symmetric");
        if (B(i, j) < 0.0 || B(i, j) > 1.0) throw ValidationError(tag + " has an entry outside [0,1]");
      }
  }
}

GramMatrix::GramMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw DimensionError("GramMatrix: not square");
  if (entries_.rows() == 0) throw ValidationError("GramMatrix: empty");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ValidationError("GramMatrix: not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  const double floor = -1e-8 * std::max(1.0, entries_.trace());
  if (es.eigenvalues().minCoeff() < floor)
    throw ValidationError("GramMatrix: not positive semidefinite (min eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()) + ")");
}

}  // namespace dimple
