#include "dimple/generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dimple/rng.hpp"

namespace dimple {

namespace {

constexpr std::uint64_t kLayerLabelStream = 0x6c61796572;  // "layer"
constexpr std::uint64_t kNodeLabelStream = 0x6e6f646573;   // "nodes"
constexpr std::uint64_t kBlockStream = 0x626c6f636b;       // "block"

void check_probabilities(const std::vector<double>& p, const char* name, std::size_t expected) {
  if (p.size() != expected)
    throw DimensionError(std::string("GenConfig: ") + name + " must have " +
                         std::to_string(expected) + " entries");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ValidationError(std::string("GenConfig: ") + name + " has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError(std::string("GenConfig: ") + name + " must sum to 1");
}

// Multinomial label vector with every group occupied; resamples the whole
// vector when a group comes out empty, up to 1000 attempts.
std::vector<int> occupied_labels(int count, const std::vector<double>& probs, Rng& rng,
                                 const char* what) {
  const int G = static_cast<int>(probs.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> labels(static_cast<std::size_t>(count));
    std::vector<int> seen(static_cast<std::size_t>(G), 0);
    for (int i = 0; i < count; ++i) {
      const int k = rng.multinomial(probs);
      labels[static_cast<std::size_t>(i)] = k + 1;
      seen[static_cast<std::size_t>(k)] = 1;
    }
    if (std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; })) return labels;
  }
  throw ValidationError(std::string("sample_model: could not draw ") + what +
                        " with every group occupied in 1000 attempts");
}

}  // namespace

void GenConfig::validate() const {
  if (n < 1 || L < 1 || K < 1 || M < 1)
    throw ValidationError("GenConfig: n, L, K, M must all be positive");
  if (!(0.0 <= a && a <= b && b <= 1.0))
    throw ValidationError("GenConfig: need 0 <= a <= b <= 1");
  if (omega.empty() || (omega.size() != 1 && omega.size() != static_cast<std::size_t>(L)))
    throw DimensionError("GenConfig: omega must hold one value or one per layer");
  for (double w : omega)
    if (!(w > 0.0)) throw ValidationError("GenConfig: omega values must be positive");
  if (!pi.empty()) check_probabilities(pi, "pi", static_cast<std::size_t>(K));
  if (!varpi.empty()) check_probabilities(varpi, "varpi", static_cast<std::size_t>(M));
}

GroundTruthModel sample_model(const GenConfig& cfg) {
  cfg.validate();
  if (cfg.n < cfg.K)
    throw ValidationError("sample_model: fewer nodes than communities (n < K)");
  if (cfg.L < cfg.M)
    throw ValidationError("sample_model: fewer layers than layer groups (L < M)");

  std::vector<double> pi = cfg.pi.empty()
                               ? std::vector<double>(static_cast<std::size_t>(cfg.K), 1.0 / cfg.K)
                               : cfg.pi;
  std::vector<double> varpi =
      cfg.varpi.empty() ? std::vector<double>(static_cast<std::size_t>(cfg.M), 1.0 / cfg.M)
                        : cfg.varpi;

  const Rng root(cfg.seed);
  Rng rng_layers = root.split(kLayerLabelStream);
  Rng rng_nodes = root.split(kNodeLabelStream);
  Rng rng_blocks = root.split(kBlockStream);

  ClusteringAssignment layer_labels(occupied_labels(cfg.L, varpi, rng_layers, "layer labels"),
                                    cfg.M);

  std::vector<ClusteringAssignment> node_labels;
  node_labels.reserve(static_cast<std::size_t>(cfg.M));
  for (int m = 0; m < cfg.M; ++m)
    node_labels.emplace_back(occupied_labels(cfg.n, pi, rng_nodes, "node labels"), cfg.K);

  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(cfg.L));
  for (int l = 0; l < cfg.L; ++l) {
    const double w = cfg.omega.size() == 1 ? cfg.omega[0] : cfg.omega[static_cast<std::size_t>(l)];
    Matrix B(cfg.K, cfg.K);
    for (int i = 0; i < cfg.K; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = rng_blocks.uniform(cfg.a, cfg.b);
        B(i, j) = v;
        B(j, i) = v;
      }
    for (int i = 0; i < cfg.K; ++i)
      for (int j = 0; j < cfg.K; ++j)
        if (i != j) B(i, j) = std::min(1.0, B(i, j) * w);
    blocks.push_back(std::move(B));
  }

  return GroundTruthModel(std::move(layer_labels), std::move(node_labels), std::move(blocks));
}

std::vector<Matrix> probability_tensor(const GroundTruthModel& model) {
  const int n = model.node_count();
  const int L = model.layer_count();
  std::vector<Matrix> P;
  P.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    const int m = model.layer_labels().label(l) - 1;
    const ClusteringAssignment& z = model.node_labels()[static_cast<std::size_t>(m)];
    const Matrix& B = model.block_matrices()[static_cast<std::size_t>(l)];
    Matrix Pl(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Pl(i, j) = B(z.label(i) - 1, z.label(j) - 1);
    P.push_back(std::move(Pl));
  }
  return P;
}

AdjacencyTensor sample_adjacency(const GroundTruthModel& model, std::uint64_t seed) {
  const std::vector<Matrix> P = probability_tensor(model);
  const int n = model.node_count();
  Rng rng(seed);
  std::vector<Matrix> layers;
  layers.reserve(P.size());
  for (const Matrix& Pl : P) {
    Matrix A = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j)
        if (rng.bernoulli(Pl(i, j))) {
          A(i, j) = 1.0;
          A(j, i) = 1.0;
        }
    layers.push_back(std::move(A));
  }
  return AdjacencyTensor(std::move(layers));
}

}  // namespace dimple
