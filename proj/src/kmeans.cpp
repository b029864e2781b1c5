#include "pecok/kmeans.hpp"

#include <cassert>
#include <limits>
#include <stdexcept>

#include "pecok/rng.hpp"

namespace pecok {

namespace {

double sq_dist(const Eigen::MatrixXd& points, int row, const Eigen::MatrixXd& centers,
               int c) {
  return (points.row(row) - centers.row(c)).squaredNorm();
}

// kmeans++: first center uniform, then D^2 sampling.
Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int k,
                             GaussianStream& rng) {
  const int p = static_cast<int>(points.rows());
  Eigen::MatrixXd centers(k, points.cols());
  centers.row(0) = points.row(static_cast<int>(rng.uniform_below(p)));
  Eigen::VectorXd d2(p);
  for (int i = 0; i < p; ++i) d2[i] = (points.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.uniform_below(p));
    } else {
      double target = rng.uniform01() * total;
      pick = p - 1;
      for (int i = 0; i < p; ++i) {
        target -= d2[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.row(c) = points.row(pick);
    for (int i = 0; i < p; ++i) {
      d2[i] = std::min(d2[i], (points.row(i) - centers.row(c)).squaredNorm());
    }
  }
  return centers;
}

KmeansResult lloyd(const Eigen::MatrixXd& points, int k, GaussianStream& rng) {
  const int p = static_cast<int>(points.rows());
  Eigen::MatrixXd centers = seed_centers(points, k, rng);
  std::vector<int> labels(p, -1);
  double objective = std::numeric_limits<double>::infinity();
  bool repaired = false;

  for (int iter = 0; iter < 300; ++iter) {
    // Assignment step.
    bool changed = false;
    double obj = 0.0;
    for (int i = 0; i < p; ++i) {
      int best = 0;
      double best_d = sq_dist(points, i, centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
      obj += best_d;
    }
    // Lloyd steps cannot increase the criterion unless a repair intervened.
    assert(repaired || obj <= objective * (1.0 + 1e-12) + 1e-12);
    objective = obj;
    repaired = false;
    if (!changed && iter > 0) break;

    // Update step.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < p; ++i) {
      sums.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / counts[c];
      } else {
        // Empty-cluster repair: reseed at the point farthest from its center.
        int farthest = 0;
        double far_d = -1.0;
        for (int i = 0; i < p; ++i) {
          const double d = sq_dist(points, i, centers, labels[i]);
          if (d > far_d) {
            far_d = d;
            farthest = i;
          }
        }
        centers.row(c) = points.row(farthest);
        repaired = true;
      }
    }
  }

  KmeansResult result;
  result.labels = std::move(labels);
  result.centers = std::move(centers);
  result.objective = objective;
  return result;
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts) {
  const int p = static_cast<int>(points.rows());
  if (k < 1 || k > p) {
    throw std::invalid_argument("kmeans: K must be in [1, p]");
  }
  if (restarts < 1) restarts = 1;

  KmeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    GaussianStream rng(mix64(seed, static_cast<std::uint64_t>(r)));
    KmeansResult candidate = lloyd(points, k, rng);
    if (candidate.objective < best.objective) {
      best = std::move(candidate);
      best.restarts_used = r + 1;
    }
  }
  best.restarts_used = restarts;
  return best;
}

}  // namespace pecok
