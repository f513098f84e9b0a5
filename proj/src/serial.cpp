#include "dimple/serial.hpp"

#include <string>

namespace dimple::serial {

std::vector<LayerEmbedding> embed_layers(const std::vector<Matrix>& layers, int K) {
  if (K < 2) throw ValidationError("embed_layers: K must be >= 2");
  std::vector<LayerEmbedding> out;
  out.reserve(layers.size());
  for (const Matrix& layer : layers) out.push_back(embed_layer(layer, K));
  return out;
}

GramMatrix raw_gram(const std::vector<LayerEmbedding>& embeddings) {
  const int L = static_cast<int>(embeddings.size());
  if (L == 0) throw ValidationError("raw_gram: no embeddings");
  const auto n = embeddings.front().factors.U.rows();
  for (const auto& e : embeddings)
    if (e.factors.U.rows() != n) throw DimensionError("raw_gram: embeddings disagree on n");

  Matrix G(L, L);
  for (int i = 0; i < L; ++i) {
    const double f = embeddings[static_cast<std::size_t>(i)].frob_norm;
    G(i, i) = f * f;
    for (int j = i + 1; j < L; ++j) {
      const Matrix cross = embeddings[static_cast<std::size_t>(i)].factors.U.transpose() *
                           embeddings[static_cast<std::size_t>(j)].factors.U;
      const double v = embeddings[static_cast<std::size_t>(i)].factors.s.dot(
          cross.array().square().matrix() * embeddings[static_cast<std::size_t>(j)].factors.s);
      G(i, j) = v;
      G(j, i) = v;
    }
  }
  return GramMatrix(std::move(G));
}

double mean_abs_entry(const std::vector<LayerEmbedding>& embeddings) {
  const int L = static_cast<int>(embeddings.size());
  if (L == 0) throw ValidationError("mean_abs_entry: no embeddings");
  const auto n = embeddings.front().factors.U.rows();
  double total = 0.0;
  for (const auto& e : embeddings) total += e.factors.reconstruct().cwiseAbs().sum();
  return total / (static_cast<double>(n) * static_cast<double>(n) * L);
}

WeightMatrix weight_matrix(const GramMatrix& G_norm, double lambda, const LassoOptions& opt) {
  const int L = G_norm.size();
  if (!(lambda > 0.0)) throw ValidationError("weight_matrix: lambda must be positive");
  WeightMatrix wm;
  wm.W = Matrix::Zero(L, L);
  for (int l = 0; l < L; ++l) wm.W.col(l) = solve_column(G_norm, l, lambda, opt).w;
  wm.W_sym = wm.W.cwiseAbs() + wm.W.transpose().cwiseAbs();
  return wm;
}

std::vector<Matrix> debiased_squares(const AdjacencyTensor& A) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(A.layer_count()));
  for (int l = 0; l < A.layer_count(); ++l) out.push_back(debiased_square(A.layer(l)));
  return out;
}

}  // namespace dimple::serial
