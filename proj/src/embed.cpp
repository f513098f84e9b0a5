#include "dimple/embed.hpp"

#include <cmath>
#include <string>

#include "dimple/parallel.hpp"

namespace dimple {

Matrix center(const Matrix& S) {
  const int n = static_cast<int>(S.rows());
  if (S.cols() != n) throw DimensionError("center: matrix not square");
  // (I - P) S (I - P) expanded entrywise for a symmetric S:
  // C(i,j) = S(i,j) - r(i) - r(j) + g with row means r and grand mean g.
  const Vector r = S.rowwise().mean();
  const double g = S.mean();
  Matrix C = S;
  C.colwise() -= r;
  C.rowwise() -= r.transpose();
  C.array() += g;
  return C;
}

LayerEmbedding embed_layer(const Matrix& layer, int K) {
  if (K < 2)
    throw ValidationError("embed_layer: K must be >= 2 (a centered one-community layer is rank 0)");
  const int n = static_cast<int>(layer.rows());
  LayerEmbedding e;
  e.factors = top_abs_eigs(center(layer), K - 1);
  e.frob_norm = e.factors.s.norm();
  e.degenerate = e.frob_norm < 1e-12 * n;
  return e;
}

std::vector<LayerEmbedding> embed_layers(const std::vector<Matrix>& layers, int K) {
  if (K < 2) throw ValidationError("embed_layers: K must be >= 2");
  std::vector<LayerEmbedding> out(layers.size());
  parallel_for_index(static_cast<int>(layers.size()), [&](int l) {
    out[static_cast<std::size_t>(l)] = embed_layer(layers[static_cast<std::size_t>(l)], K);
  });
  return out;
}

std::vector<LayerEmbedding> embed_layers(const AdjacencyTensor& A, int K) {
  return embed_layers(A.layers(), K);
}

namespace {

// trace((U1 D1 U1^T)(U2 D2 U2^T)) = sum_ij D1_i D2_j (U1^T U2)_ij^2
double factored_trace_product(const LayerEmbedding& e1, const LayerEmbedding& e2) {
  const Matrix cross = e1.factors.U.transpose() * e2.factors.U;
  return e1.factors.s.dot(cross.array().square().matrix() * e2.factors.s);
}

}  // namespace

GramMatrix raw_gram(const std::vector<LayerEmbedding>& embeddings) {
  const int L = static_cast<int>(embeddings.size());
  if (L == 0) throw ValidationError("raw_gram: no embeddings");
  const auto n = embeddings.front().factors.U.rows();
  for (const auto& e : embeddings)
    if (e.factors.U.rows() != n) throw DimensionError("raw_gram: embeddings disagree on n");

  Matrix G(L, L);
  for (int l = 0; l < L; ++l) {
    const double f = embeddings[static_cast<std::size_t>(l)].frob_norm;
    G(l, l) = f * f;
  }

  // upper-triangle pair list, parallel
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(L) * (L - 1) / 2);
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) pairs.emplace_back(i, j);
  parallel_for_index(static_cast<int>(pairs.size()), [&](int p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    const double v = factored_trace_product(embeddings[static_cast<std::size_t>(i)],
                                            embeddings[static_cast<std::size_t>(j)]);
    G(i, j) = v;
    G(j, i) = v;
  });
  return GramMatrix(std::move(G));
}

std::vector<double> embedding_norms(const std::vector<LayerEmbedding>& embeddings) {
  std::vector<double> norms(embeddings.size());
  for (std::size_t l = 0; l < embeddings.size(); ++l) norms[l] = embeddings[l].frob_norm;
  return norms;
}

GramMatrix normalized_gram(const GramMatrix& raw, const std::vector<double>& norms) {
  const int L = raw.size();
  if (static_cast<int>(norms.size()) != L)
    throw DimensionError("normalized_gram: norm count does not match Gram size");
  for (int l = 0; l < L; ++l)
    if (!(norms[static_cast<std::size_t>(l)] > 0.0))
      throw ValidationError("normalized_gram: zero norm for layer " + std::to_string(l) +
                            " (degenerate layer: empty or constant graph)");
  Matrix N(L, L);
  for (int i = 0; i < L; ++i) {
    N(i, i) = 1.0;
    for (int j = i + 1; j < L; ++j) {
      const double v =
          raw(i, j) / (norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]);
      N(i, j) = v;
      N(j, i) = v;
    }
  }
  return GramMatrix(std::move(N));
}

double mean_abs_entry(const std::vector<LayerEmbedding>& embeddings) {
  const int L = static_cast<int>(embeddings.size());
  if (L == 0) throw ValidationError("mean_abs_entry: no embeddings");
  const auto n = embeddings.front().factors.U.rows();
  std::vector<double> partial(static_cast<std::size_t>(L), 0.0);
  parallel_for_index(L, [&](int l) {
    partial[static_cast<std::size_t>(l)] =
        embeddings[static_cast<std::size_t>(l)].factors.reconstruct().cwiseAbs().sum();
  });
  double total = 0.0;  // sequential reduction keeps the result schedule-independent
  for (double v : partial) total += v;
  return total / (static_cast<double>(n) * static_cast<double>(n) * L);
}

}  // namespace dimple
