#pragma once

#include <vector>

#include "dimple/core.hpp"
#include "dimple/linalg.hpp"

namespace dimple {

/// Rank-(K-1) factorization of a centered layer. Stands in for the
/// n^2-dimensional vectorized approximation; nothing downstream ever
/// materializes that vector.
struct LayerEmbedding {
  RankKFactors factors;     // r = K-1 eigenpairs of the centered layer
  double frob_norm = 0.0;   // Frobenius norm of the reconstruction
  bool degenerate = false;  // frob_norm below the noise floor 1e-12 * n
};

/// (I - 11^T/n) S (I - 11^T/n): removes the all-ones direction every block
/// pattern shares. Rows and columns of the result sum to ~0.
Matrix center(const Matrix& S);

/// Centers the layer and keeps its K-1 leading eigenpairs by |eigenvalue|.
/// Requires K >= 2; with K = 1 the centered block model is identically rank
/// zero and the method does not apply.
LayerEmbedding embed_layer(const Matrix& layer, int K);

/// Per-layer embedding, parallel over layers.
std::vector<LayerEmbedding> embed_layers(const std::vector<Matrix>& layers, int K);
std::vector<LayerEmbedding> embed_layers(const AdjacencyTensor& A, int K);

/// L x L Gram matrix of the vectorized reconstructions. Entry (l1, l2) is
/// trace(P1 P2), evaluated from the factors in O(n K^2) per pair. Parallel
/// over the upper-triangle pair list.
GramMatrix raw_gram(const std::vector<LayerEmbedding>& embeddings);

std::vector<double> embedding_norms(const std::vector<LayerEmbedding>& embeddings);

/// Rescales a raw Gram to unit-norm columns: entry (l1, l2) divided by
/// norms[l1] * norms[l2], diagonal set to exactly 1. A nonpositive norm is a
/// degenerate layer (empty or constant graph) and is an error naming it.
GramMatrix normalized_gram(const GramMatrix& raw, const std::vector<double>& norms);

/// Mean absolute entry over all reconstructions, (n^2 L)^-1 sum_l |P_l|_1,
/// streaming one reconstructed layer at a time.
double mean_abs_entry(const std::vector<LayerEmbedding>& embeddings);

}  // namespace dimple
