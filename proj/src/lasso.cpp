#include "dimple/lasso.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace dimple {

namespace {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

double objective_value(const Matrix& G, const Vector& b, double lambda, const Vector& w) {
  return w.dot(G * w) - 2.0 * b.dot(w) + 1.0 + 2.0 * lambda * w.lpNorm<1>();
}

}  // namespace

double kkt_residual(const GramMatrix& G, int target, double lambda, const Vector& w) {
  const int L = G.size();
  if (target < 0 || target >= L) throw DimensionError("kkt_residual: target outside [0, L)");
  if (w.size() != L) throw DimensionError("kkt_residual: weight length does not match Gram");
  if (w(target) != 0.0) throw ValidationError("kkt_residual: w[target] must be 0");
  const Vector r = 2.0 * (G.entries() * w - G.entries().col(target));
  double res = 0.0;
  for (int j = 0; j < L; ++j) {
    if (j == target) continue;
    double v;
    if (w(j) > 0.0)
      v = std::abs(r(j) + 2.0 * lambda);
    else if (w(j) < 0.0)
      v = std::abs(r(j) - 2.0 * lambda);
    else
      v = std::max(0.0, std::abs(r(j)) - 2.0 * lambda);
    res = std::max(res, v);
  }
  return res;
}

LassoSolution solve_column(const GramMatrix& G, int target, double lambda,
                           const LassoOptions& opt) {
  const int L = G.size();
  if (target < 0 || target >= L) throw DimensionError("solve_column: target outside [0, L)");
  if (!(lambda > 0.0)) throw ValidationError("solve_column: lambda must be positive");

  const Matrix& Gm = G.entries();
  const Vector b = Gm.col(target);

  Vector w = Vector::Zero(L);
  Vector grad = Vector::Zero(L);  // grad = G w, maintained incrementally
#ifndef NDEBUG
  double prev_obj = objective_value(Gm, b, lambda, w);
#endif

  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (int j = 0; j < L; ++j) {
      if (j == target) continue;
      const double gjj = Gm(j, j);
      if (!(gjj > 0.0)) continue;  // zero-variance coordinate stays at 0
      const double z = b(j) - (grad(j) - gjj * w(j));
      const double wj = soft_threshold(z, lambda) / gjj;
      if (wj != w(j)) {
        const double d = wj - w(j);
        grad += d * Gm.col(j);
        w(j) = wj;
        max_delta = std::max(max_delta, std::abs(d));
      }
    }
#ifndef NDEBUG
    const double obj = objective_value(Gm, b, lambda, w);
    assert(obj <= prev_obj + 1e-10 * (1.0 + std::abs(prev_obj)) &&
           "coordinate descent objective must be nonincreasing");
    prev_obj = obj;
#endif
    if (max_delta < opt.tol) {
      const double res = kkt_residual(G, target, lambda, w);
      if (res <= opt.kkt_tol) {
        LassoSolution sol;
        sol.w = std::move(w);
        sol.objective = objective_value(Gm, b, lambda, sol.w);
        sol.kkt_residual = res;
        sol.sweeps = sweep;
        sol.converged = true;
        return sol;
      }
    }
  }

  LassoSolution best;
  best.w = std::move(w);
  best.objective = objective_value(Gm, b, lambda, best.w);
  best.kkt_residual = kkt_residual(G, target, lambda, best.w);
  best.sweeps = opt.max_sweeps;
  best.converged = false;
  throw SolverError("solve_column: no convergence for column " + std::to_string(target) +
                        " after " + std::to_string(opt.max_sweeps) + " sweeps (KKT residual " +
                        std::to_string(best.kkt_residual) + ")",
                    std::move(best), target);
}

double default_lambda(const std::vector<LayerEmbedding>& embeddings) {
  return 4.0 * mean_abs_entry(embeddings);
}

}  // namespace dimple
