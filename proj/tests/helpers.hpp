#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pecok/model.hpp"
#include "pecok/partition.hpp"
#include "pecok/rng.hpp"

namespace pecok::test {

// Random partition of p indices into k groups, each of size >= min_size.
inline Partition random_partition(int p, int k, int min_size, GaussianStream& rng) {
  std::vector<int> labels(p);
  for (int g = 0; g < k; ++g) {
    for (int i = 0; i < min_size; ++i) labels[g * min_size + i] = g;
  }
  for (int i = k * min_size; i < p; ++i) {
    labels[i] = static_cast<int>(rng.uniform_below(k));
  }
  // Shuffle for non-contiguous groups.
  for (int i = p - 1; i > 0; --i) {
    std::swap(labels[i], labels[rng.uniform_below(static_cast<std::uint64_t>(i) + 1)]);
  }
  return Partition(labels);
}

// Random PSD matrix M M^t / k.
inline Eigen::MatrixXd random_psd(int k, GaussianStream& rng) {
  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m(i, j) = rng.next();
  }
  return m * m.transpose() / k;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, GaussianStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next();
  }
  return m;
}

inline Eigen::VectorXd random_nonneg(int p, GaussianStream& rng, double scale = 1.0) {
  Eigen::VectorXd v(p);
  for (int i = 0; i < p; ++i) v[i] = scale * rng.uniform01();
  return v;
}

// Random model with k groups of size >= min_size and Delta(C) >= min_delta.
inline ModelSpec random_model(int p, int k, int min_size, double min_delta,
                              GaussianStream& rng) {
  const Partition partition = random_partition(p, k, min_size, rng);
  Eigen::MatrixXd c = random_psd(k, rng);
  const double delta = delta_separation(c);
  if (delta < min_delta) {
    // Raising the diagonal raises every pairwise gap by the same amount.
    c += 0.5 * (min_delta - delta) * Eigen::MatrixXd::Identity(k, k);
  }
  return ModelSpec{partition, c, random_nonneg(p, rng, 2.0)};
}

}  // namespace pecok::test
