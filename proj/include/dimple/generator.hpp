#pragma once

#include <cstdint>
#include <vector>

#include "dimple/core.hpp"

namespace dimple {

/// Parameters for sampling a synthetic multiplex network.
///
/// Block probabilities are drawn Uniform[a, b] on the lower triangle
/// (diagonal included), mirrored, then off-diagonal entries are multiplied by
/// the assortativity factor omega and clamped to [0, 1]. omega holds either a
/// single shared value or one value per layer (by layer index).
struct GenConfig {
  int n = 0;
  int L = 0;
  int K = 0;
  int M = 0;
  double a = 0.3;
  double b = 0.8;
  std::vector<double> omega{1.0};
  std::vector<double> pi;     // community probabilities, empty = uniform
  std::vector<double> varpi;  // layer-group probabilities, empty = uniform
  std::uint64_t seed = 0;

  void validate() const;
};

/// Samples layer-group labels, per-group node communities, and block
/// matrices. Label vectors with an empty group/community are resampled
/// (at most 1000 attempts each) so every group and community is occupied.
///
/// Draw order is part of the determinism contract: layer labels, then node
/// labels for group 1..M, then block matrices for layer 1..L (lower triangle
/// in row-major order). The three parts use independent sub-streams of
/// cfg.seed, so enlarging one does not shift the others.
GroundTruthModel sample_model(const GenConfig& cfg);

/// Edge-probability matrices P^(l) with P(i,j) = B^(l)(z(i), z(j)) where z is
/// the node labeling of the layer's group. Diagonal retained as defined;
/// masking happens at adjacency sampling.
std::vector<Matrix> probability_tensor(const GroundTruthModel& model);

/// Bernoulli-samples each layer on the strict lower triangle (layer-major,
/// row-major), mirrors the upper half, and zeroes the diagonal.
AdjacencyTensor sample_adjacency(const GroundTruthModel& model, std::uint64_t seed);

}  // namespace dimple
