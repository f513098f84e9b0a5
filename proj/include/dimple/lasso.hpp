#pragma once

#include <stdexcept>

#include "dimple/core.hpp"
#include "dimple/embed.hpp"

namespace dimple {

struct LassoSolution {
  Vector w;                   // length L, w[target] = 0
  double objective = 0.0;     // |y - Yw|^2 + 2*lambda*|w|_1, via Gram identities
  double kkt_residual = 0.0;  // max subgradient violation
  int sweeps = 0;
  bool converged = false;
};

struct LassoOptions {
  double tol = 1e-8;       // max coordinate change per sweep
  double kkt_tol = 1e-6;   // certificate threshold at convergence
  int max_sweeps = 10000;  // each sweep updates all L coordinates once
};

/// Coordinate descent failed to converge; carries the best iterate.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, LassoSolution best_iterate, int target)
      : std::runtime_error(message), best(std::move(best_iterate)), target_index(target) {}

  LassoSolution best;
  int target_index;
};

/// Self-representation LASSO for one column: minimizes
///   w^T G w - 2 G(:,target)^T w + 1 + 2*lambda*|w|_1   s.t. w[target] = 0,
/// which equals |y - Yw|^2 + 2*lambda*|w|_1 when G = Y^T Y has unit diagonal.
/// Cyclic coordinate descent with exact soft-threshold updates; convergence
/// requires both the coordinate-change test and the KKT certificate.
LassoSolution solve_column(const GramMatrix& G, int target, double lambda,
                           const LassoOptions& opt = {});

/// Max KKT violation of w for the problem above: with r = 2(Gw - G(:,target)),
/// |r_j + 2*lambda*sign(w_j)| on the support and max(0, |r_j| - 2*lambda) off
/// it, over j != target. Requires w[target] = 0.
double kkt_residual(const GramMatrix& G, int target, double lambda, const Vector& w);

/// Empirical penalty: 4 times the mean absolute entry of the embeddings.
double default_lambda(const std::vector<LayerEmbedding>& embeddings);

}  // namespace dimple
