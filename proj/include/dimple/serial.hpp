#pragma once

#include <vector>

#include "dimple/between.hpp"
#include "dimple/core.hpp"
#include "dimple/embed.hpp"
#include "dimple/lasso.hpp"
#include "dimple/within.hpp"

// Plain single-threaded reference versions of the OpenMP kernels. Kept for
// testing (the parallel kernels must match them bit for bit) and for the
// benchmark target.
namespace dimple::serial {

std::vector<LayerEmbedding> embed_layers(const std::vector<Matrix>& layers, int K);

GramMatrix raw_gram(const std::vector<LayerEmbedding>& embeddings);

double mean_abs_entry(const std::vector<LayerEmbedding>& embeddings);

WeightMatrix weight_matrix(const GramMatrix& G_norm, double lambda,
                           const LassoOptions& opt = {});

std::vector<Matrix> debiased_squares(const AdjacencyTensor& A);

}  // namespace dimple::serial
