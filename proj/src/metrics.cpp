#include "pecok/metrics.hpp"

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

namespace pecok {

namespace {

// O(n^3) Hungarian algorithm (shortest augmenting paths with potentials)
// for a square cost matrix; returns the row -> column assignment.
std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j]) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

Eigen::MatrixXd miss_cost(const Partition& g_est, const Partition& g_true, int n) {
  const int k_true = g_true.k();
  const int k_est = g_est.k();
  // overlap(k, j) = |G*_k intersect G_hat_j|
  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(k_true, k_est);
  for (int a = 0; a < g_true.size(); ++a) {
    overlap(g_true.labels()[a], g_est.labels()[a]) += 1.0;
  }
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < k_true; ++k) {
    for (int j = 0; j < n; ++j) {
      const double hit = (j < k_est) ? overlap(k, j) : 0.0;  // padded empty group
      cost(k, j) = g_true.group_sizes()[k] - hit;
    }
  }
  // Padded true groups are empty, so |empty \ anything| = 0 everywhere.
  return cost;
}

}  // namespace

bool exact_match(const Partition& g_est, const Partition& g_true) {
  if (g_est.size() != g_true.size()) {
    throw std::invalid_argument("exact_match: partitions over different p");
  }
  return g_est == g_true;
}

double lbar(const Partition& g_est, const Partition& g_true) {
  return compare_partitions(g_est, g_true).lbar_value;
}

ComparisonReport compare_partitions(const Partition& g_est,
                                    const Partition& g_true) {
  if (g_est.size() != g_true.size()) {
    throw std::invalid_argument("compare_partitions: partitions over different p");
  }
  ComparisonReport report;
  report.k_true = g_true.k();
  report.k_est = g_est.k();
  report.exact = (g_est == g_true);

  const int n = std::max(report.k_true, report.k_est);
  const Eigen::MatrixXd cost = miss_cost(g_est, g_true, n);
  const std::vector<int> assignment = hungarian(cost);
  double total = 0.0;
  for (int k = 0; k < report.k_true; ++k) total += cost(k, assignment[k]);
  report.lbar_value = total / g_true.min_group_size();
  report.matched_permutation.assign(assignment.begin(),
                                    assignment.begin() + report.k_true);
  return report;
}

}  // namespace pecok
