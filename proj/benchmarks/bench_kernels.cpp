// Compares the OpenMP kernels against their serial reference implementations
// on one synthetic instance: wall time, speedup, and max absolute difference
// (which must be exactly zero).

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "dimple/embed.hpp"
#include "dimple/generator.hpp"
#include "dimple/lasso.hpp"
#include "dimple/parallel.hpp"
#include "dimple/serial.hpp"
#include "dimple/within.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() - t0)
      .count();
}

double max_abs_diff(const dimple::Matrix& a, const dimple::Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

void report(const char* name, double serial_ms, double parallel_ms, double diff) {
  std::printf("%-18s %10.1f ms %10.1f ms %8.2fx   max|diff| = %g\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, diff);
}

}  // namespace

int main(int argc, char** argv) {
  int n = 240, L = 48;
  if (argc > 1) n = std::stoi(argv[1]);
  if (argc > 2) L = std::stoi(argv[2]);
  const int K = 3, M = 3;

  dimple::GenConfig cfg;
  cfg.n = n;
  cfg.L = L;
  cfg.K = K;
  cfg.M = M;
  cfg.omega = {1.25};
  cfg.seed = 20240101;
  const dimple::GroundTruthModel model = dimple::sample_model(cfg);
  const dimple::AdjacencyTensor A = dimple::sample_adjacency(model, 7);

  std::printf("n=%d L=%d K=%d M=%d, %d thread(s)\n", n, L, K, M, dimple::hardware_threads());
  std::printf("%-18s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  std::vector<dimple::LayerEmbedding> emb_s, emb_p;
  const double t_embed_s = time_ms([&] { emb_s = dimple::serial::embed_layers(A.layers(), K); });
  const double t_embed_p = time_ms([&] { emb_p = dimple::embed_layers(A, K); });
  double diff = 0.0;
  for (int l = 0; l < L; ++l)
    diff = std::max(diff, max_abs_diff(emb_s[static_cast<std::size_t>(l)].factors.reconstruct(),
                                       emb_p[static_cast<std::size_t>(l)].factors.reconstruct()));
  report("embed_layers", t_embed_s, t_embed_p, diff);

  dimple::Matrix gram_s, gram_p;
  const double t_gram_s = time_ms([&] { gram_s = dimple::serial::raw_gram(emb_s).entries(); });
  const double t_gram_p = time_ms([&] { gram_p = dimple::raw_gram(emb_p).entries(); });
  report("raw_gram", t_gram_s, t_gram_p, max_abs_diff(gram_s, gram_p));

  const dimple::GramMatrix G =
      dimple::normalized_gram(dimple::GramMatrix(gram_p), dimple::embedding_norms(emb_p));
  const double lambda = dimple::default_lambda(emb_p);
  dimple::Matrix w_s, w_p;
  const double t_w_s = time_ms([&] { w_s = dimple::serial::weight_matrix(G, lambda).W; });
  const double t_w_p = time_ms([&] { w_p = dimple::weight_matrix(G, lambda).W; });
  report("weight_matrix", t_w_s, t_w_p, max_abs_diff(w_s, w_p));

  std::vector<dimple::Matrix> sq_s, sq_p;
  const double t_sq_s = time_ms([&] { sq_s = dimple::serial::debiased_squares(A); });
  const double t_sq_p = time_ms([&] { sq_p = dimple::debiased_squares(A); });
  diff = 0.0;
  for (int l = 0; l < L; ++l)
    diff = std::max(diff, max_abs_diff(sq_s[static_cast<std::size_t>(l)],
                                       sq_p[static_cast<std::size_t>(l)]));
  report("debiased_squares", t_sq_s, t_sq_p, diff);

  double mae_s = 0.0, mae_p = 0.0;
  const double t_mae_s = time_ms([&] { mae_s = dimple::serial::mean_abs_entry(emb_s); });
  const double t_mae_p = time_ms([&] { mae_p = dimple::mean_abs_entry(emb_p); });
  report("mean_abs_entry", t_mae_s, t_mae_p, std::abs(mae_s - mae_p));

  return 0;
}
