#include "dimple/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "dimple/parallel.hpp"
#include "dimple/rng.hpp"

namespace dimple {

RankKFactors top_abs_eigs(const Matrix& S, int r) {
  const int n = static_cast<int>(S.rows());
  if (S.cols() != n) throw DimensionError("top_abs_eigs: matrix not square");
  if (r < 1 || r > n) throw DimensionError("top_abs_eigs: rank outside [1, n]");
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ValidationError("top_abs_eigs: matrix not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw ValidationError("top_abs_eigs: eigensolver failed");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const Vector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::abs(ev(i)) > std::abs(ev(j)); });

  RankKFactors out;
  out.U.resize(n, r);
  out.s.resize(r);
  for (int k = 0; k < r; ++k) {
    out.U.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    out.s(k) = ev(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Matrix rank_k_project(const Matrix& S, int r) { return top_abs_eigs(S, r).reconstruct(); }

namespace {

struct LloydRun {
  std::vector<int> labels;  // 0-based cluster per point
  double cost = std::numeric_limits<double>::infinity();
};

// kmeans++ seeding: inverse-CDF sampling over squared distances, ties and
// exhausted mass resolving to the lowest admissible index.
Matrix seed_centers(const Matrix& pts, int G, Rng& rng) {
  const int N = static_cast<int>(pts.rows());
  Matrix centers(G, pts.cols());
  std::vector<char> used(static_cast<std::size_t>(N), 0);

  int first = static_cast<int>(rng.next_double() * N);
  first = std::min(first, N - 1);
  centers.row(0) = pts.row(first);
  used[static_cast<std::size_t>(first)] = 1;

  Vector dist2(N);
  for (int i = 0; i < N; ++i) dist2(i) = (pts.row(i) - centers.row(0)).squaredNorm();

  for (int g = 1; g < G; ++g) {
    const double total = dist2.sum();
    int pick = -1;
    if (total > 0.0) {
      const double u = rng.next_double() * total;
      double cum = 0.0;
      for (int i = 0; i < N; ++i) {
        cum += dist2(i);
        if (cum > u) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // float underflow of the tail; take the last positive mass
        for (int i = N - 1; i >= 0; --i)
          if (dist2(i) > 0.0) {
            pick = i;
            break;
          }
      }
    }
    if (pick < 0) {  // all remaining points coincide with chosen centers
      for (int i = 0; i < N; ++i)
        if (!used[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
    }
    centers.row(g) = pts.row(pick);
    used[static_cast<std::size_t>(pick)] = 1;
    for (int i = 0; i < N; ++i)
      dist2(i) = std::min(dist2(i), (pts.row(i) - centers.row(g)).squaredNorm());
  }
  return centers;
}

LloydRun lloyd(const Matrix& pts, int G, Rng rng) {
  const int N = static_cast<int>(pts.rows());
  Matrix centers = seed_centers(pts, G, rng);

  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(N), 0);
  double prev_cost = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < 300; ++iter) {
    // assignment; ties go to the lowest center index
    for (int i = 0; i < N; ++i) {
      int best = 0;
      double best_d = (pts.row(i) - centers.row(0)).squaredNorm();
      for (int g = 1; g < G; ++g) {
        const double d = (pts.row(i) - centers.row(g)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = g;
        }
      }
      run.labels[static_cast<std::size_t>(i)] = best;
    }

    // re-seat empty clusters on the farthest point of a non-singleton cluster
    std::vector<int> counts(static_cast<std::size_t>(G), 0);
    for (int lab : run.labels) ++counts[static_cast<std::size_t>(lab)];
    for (int g = 0; g < G; ++g) {
      if (counts[static_cast<std::size_t>(g)] > 0) continue;
      int donor = -1;
      double worst = -1.0;
      for (int i = 0; i < N; ++i) {
        const int li = run.labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(li)] < 2) continue;
        const double d = (pts.row(i) - centers.row(li)).squaredNorm();
        if (d > worst) {
          worst = d;
          donor = i;
        }
      }
      if (donor < 0) break;  // N < G upstream; unreachable given validation
      --counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(donor)])];
      run.labels[static_cast<std::size_t>(donor)] = g;
      counts[static_cast<std::size_t>(g)] = 1;
      centers.row(g) = pts.row(donor);
    }

    // center update
    Matrix next = Matrix::Zero(G, pts.cols());
    for (int i = 0; i < N; ++i) next.row(run.labels[static_cast<std::size_t>(i)]) += pts.row(i);
    for (int g = 0; g < G; ++g) next.row(g) /= static_cast<double>(counts[static_cast<std::size_t>(g)]);

    double movement = 0.0;
    for (int g = 0; g < G; ++g)
      movement = std::max(movement, (next.row(g) - centers.row(g)).norm());
    centers = next;

    double cost = 0.0;
    for (int i = 0; i < N; ++i)
      cost += (pts.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
    assert(cost <= prev_cost * (1.0 + 1e-12) + 1e-12 && "Lloyd cost must be nonincreasing");
    prev_cost = cost;

    if (movement < 1e-9) break;
  }
  run.cost = prev_cost;
  return run;
}

}  // namespace

ClusteringAssignment kmeans(const Matrix& points, int G, int restarts, std::uint64_t seed) {
  const int N = static_cast<int>(points.rows());
  if (G < 1) throw ValidationError("kmeans: cluster count must be >= 1");
  if (G > N) throw ValidationError("kmeans: more clusters than points");
  if (restarts < 1) throw ValidationError("kmeans: need at least one restart");

  const Rng base(seed);
  std::vector<LloydRun> runs(static_cast<std::size_t>(restarts));
  parallel_for_index(restarts, [&](int r) {
    runs[static_cast<std::size_t>(r)] = lloyd(points, G, base.split(static_cast<std::uint64_t>(r)));
  });

  // winner by (cost, restart index) for schedule-independent determinism
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (runs[static_cast<std::size_t>(r)].cost < runs[static_cast<std::size_t>(best)].cost) best = r;

  std::vector<int> labels(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i)
    labels[static_cast<std::size_t>(i)] = runs[static_cast<std::size_t>(best)].labels[static_cast<std::size_t>(i)] + 1;
  return ClusteringAssignment(std::move(labels), G);
}

double kmeans_cost(const Matrix& points, const ClusteringAssignment& assignment) {
  if (assignment.size() != points.rows())
    throw DimensionError("kmeans_cost: assignment does not match point count");
  const int G = assignment.groups();
  Matrix centers = Matrix::Zero(G, points.cols());
  std::vector<int> counts = assignment.group_sizes();
  for (int i = 0; i < points.rows(); ++i) centers.row(assignment.label(i) - 1) += points.row(i);
  for (int g = 0; g < G; ++g)
    if (counts[static_cast<std::size_t>(g)] > 0) centers.row(g) /= counts[static_cast<std::size_t>(g)];
  double cost = 0.0;
  for (int i = 0; i < points.rows(); ++i)
    cost += (points.row(i) - centers.row(assignment.label(i) - 1)).squaredNorm();
  return cost;
}

}  // namespace dimple
