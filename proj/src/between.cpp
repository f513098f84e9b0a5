#include "dimple/between.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "dimple/embed.hpp"
#include "dimple/linalg.hpp"
#include "dimple/parallel.hpp"
#include "dimple/rng.hpp"

namespace dimple {

namespace {

constexpr std::uint64_t kSpectralStream = 0x73706563;  // "spec"
constexpr std::uint64_t kMergeStream = 0x6d657267;     // "merg"

void check_affinity(const Matrix& W_sym, const char* who) {
  if (W_sym.rows() != W_sym.cols()) throw DimensionError(std::string(who) + ": matrix not square");
  const double scale = std::max(1.0, W_sym.cwiseAbs().maxCoeff());
  if ((W_sym - W_sym.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ValidationError(std::string(who) + ": affinity not symmetric");
}

}  // namespace

WeightMatrix weight_matrix(const GramMatrix& G_norm, double lambda, const LassoOptions& opt) {
  const int L = G_norm.size();
  if (!(lambda > 0.0)) throw ValidationError("weight_matrix: lambda must be positive");
  WeightMatrix wm;
  wm.W = Matrix::Zero(L, L);
  parallel_for_index(L, [&](int l) { wm.W.col(l) = solve_column(G_norm, l, lambda, opt).w; });
  wm.W_sym = wm.W.cwiseAbs() + wm.W.transpose().cwiseAbs();
  return wm;
}

ClusteringAssignment spectral_cluster_affinity(const Matrix& W_sym, int M, std::uint64_t seed,
                                               int kmeans_restarts) {
  check_affinity(W_sym, "spectral_cluster_affinity");
  const int L = static_cast<int>(W_sym.rows());
  if (M < 1 || M > L) throw DimensionError("spectral_cluster_affinity: M outside [1, L]");
  const Matrix lap = Matrix(W_sym.rowwise().sum().asDiagonal()) - W_sym;
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  if (es.info() != Eigen::Success)
    throw ValidationError("spectral_cluster_affinity: eigensolver failed");
  // ascending eigenvalues: the first M columns span the flattest directions
  const Matrix rows = es.eigenvectors().leftCols(M);
  return kmeans(rows, M, kmeans_restarts, seed);
}

Components connected_components(const Matrix& W_sym, double edge_eps) {
  check_affinity(W_sym, "connected_components");
  const int L = static_cast<int>(W_sym.rows());

  std::vector<int> parent(static_cast<std::size_t>(L));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j)
      if (W_sym(i, j) > edge_eps) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }

  // components numbered by smallest member index
  std::vector<int> comp_of_root(static_cast<std::size_t>(L), 0);
  int count = 0;
  std::vector<int> labels(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) {
    const int r = find(i);
    if (r == i) comp_of_root[static_cast<std::size_t>(r)] = ++count;
    labels[static_cast<std::size_t>(i)] = comp_of_root[static_cast<std::size_t>(r)];
  }
  return Components{count, ClusteringAssignment(std::move(labels), count)};
}

double default_threshold(const Matrix& upsilon_tilde, bool* all_equal) {
  const int Mt = static_cast<int>(upsilon_tilde.rows());
  if (Mt < 2) throw ValidationError("default_threshold: need at least two components");
  if (all_equal) *all_equal = false;
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(Mt) * (Mt - 1) / 2);
  for (int i = 0; i < Mt; ++i)
    for (int j = i + 1; j < Mt; ++j) entries.push_back(upsilon_tilde(i, j));
  std::sort(entries.begin(), entries.end());
  if (entries.front() == entries.back()) {
    if (all_equal) *all_equal = true;
    return entries.front() + 1e-9;
  }
  std::size_t best = 0;
  double best_gap = -1.0;
  for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
    const double gap = entries[k + 1] - entries[k];
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return 0.5 * (entries[best] + entries[best + 1]);
}

MergeOutcome merge_components(const GramMatrix& G_norm, const Components& components, int M,
                              std::optional<double> threshold, std::uint64_t seed,
                              int kmeans_restarts) {
  const int L = G_norm.size();
  const int Mt = components.count;
  if (components.labels.size() != L)
    throw DimensionError("merge_components: component labels do not match Gram size");
  if (Mt < M) throw ValidationError("merge_components: fewer components than target groups");
  if (M < 1) throw ValidationError("merge_components: M must be >= 1");

  const Matrix upsilon = G_norm.entries().cwiseAbs();
  const Matrix phi = components.labels.membership_matrix();
  Vector inv_sqrt_sizes(Mt);
  {
    const std::vector<int> sizes = components.labels.group_sizes();
    for (int m = 0; m < Mt; ++m)
      inv_sqrt_sizes(m) = 1.0 / std::sqrt(static_cast<double>(sizes[static_cast<std::size_t>(m)]));
  }
  Matrix upsilon_tilde = inv_sqrt_sizes.asDiagonal() * (phi.transpose() * upsilon * phi) *
                         inv_sqrt_sizes.asDiagonal();

  MergeReport report(Mt, components.labels);
  report.merged = true;
  bool all_equal = false;
  const double T = threshold ? *threshold : default_threshold(upsilon_tilde, &all_equal);
  report.threshold_used = T;
  report.upsilon_tilde = upsilon_tilde;

  Matrix g_hat(Mt, Mt);
  for (int i = 0; i < Mt; ++i)
    for (int j = 0; j < Mt; ++j) g_hat(i, j) = upsilon_tilde(i, j) > T ? 1.0 : 0.0;
  // symmetrize by logical OR against numerical asymmetry
  for (int i = 0; i < Mt; ++i)
    for (int j = i + 1; j < Mt; ++j) {
      const double v = std::max(g_hat(i, j), g_hat(j, i));
      g_hat(i, j) = v;
      g_hat(j, i) = v;
    }
  report.g_hat = g_hat;

  bool any_offdiag = false;
  for (int i = 0; i < Mt && !any_offdiag; ++i)
    for (int j = i + 1; j < Mt; ++j)
      if (g_hat(i, j) > 0.0) {
        any_offdiag = true;
        break;
      }
  if (!any_offdiag && Mt > M) {
    report.low_confidence = true;
    report.note = "thresholded component affinity is the identity; merge has no signal";
  }

  const RankKFactors eig = top_abs_eigs(g_hat, M);
  const ClusteringAssignment theta = kmeans(eig.U, M, kmeans_restarts, seed);
  report.component_groups = theta;

  std::vector<int> labels(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l)
    labels[static_cast<std::size_t>(l)] = theta.label(components.labels.label(l) - 1);
  return MergeOutcome{std::move(report), ClusteringAssignment(std::move(labels), M)};
}

BetweenResult between_layer_cluster(const AdjacencyTensor& A, int K, int M,
                                    const BetweenOptions& opt, std::uint64_t seed) {
  const int L = A.layer_count();
  if (M < 1 || M > L) throw ValidationError("between_layer_cluster: M outside [1, L]");
  const Rng root(seed);

  std::vector<LayerEmbedding> embeddings;
  try {
    embeddings = embed_layers(A, K);
  } catch (const std::exception& e) {
    throw PipelineError("embed", e.what());
  }
  for (int l = 0; l < L; ++l)
    if (embeddings[static_cast<std::size_t>(l)].degenerate)
      throw PipelineError("embed", "layer " + std::to_string(l) +
                                       " is degenerate (empty or constant graph)");

  const double lambda = opt.lambda ? *opt.lambda : default_lambda(embeddings);
  if (!(lambda > 0.0))
    throw PipelineError("lambda", "penalty must be positive (all-zero embeddings?)");

  GramMatrix G_norm = [&] {
    try {
      return normalized_gram(raw_gram(embeddings), embedding_norms(embeddings));
    } catch (const std::exception& e) {
      throw PipelineError("gram", e.what());
    }
  }();

  WeightMatrix wm = [&] {
    try {
      return weight_matrix(G_norm, lambda, opt.lasso);
    } catch (const std::exception& e) {
      throw PipelineError("weights", e.what());
    }
  }();

  ClusteringAssignment spectral = [&] {
    try {
      return spectral_cluster_affinity(wm.W_sym, M, root.split(kSpectralStream).seed(),
                                       opt.kmeans_restarts);
    } catch (const std::exception& e) {
      throw PipelineError("spectral", e.what());
    }
  }();

  Components comps = connected_components(wm.W_sym, opt.edge_eps);

  if (comps.count <= M) {
    MergeReport report(comps.count, std::move(comps.labels));
    if (comps.count < M) {
      report.low_confidence = true;
      report.note = "affinity graph has fewer components than target groups";
    }
    return BetweenResult{std::move(spectral), std::move(report), lambda};
  }

  try {
    MergeOutcome merged = merge_components(G_norm, comps, M, opt.threshold,
                                           root.split(kMergeStream).seed(), opt.kmeans_restarts);
    return BetweenResult{std::move(merged.labels), std::move(merged.report), lambda};
  } catch (const std::exception& e) {
    throw PipelineError("merge", e.what());
  }
}

}  // namespace dimple
