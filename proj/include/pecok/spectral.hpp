#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "pecok/gamma.hpp"
#include "pecok/partition.hpp"

namespace pecok {

struct SpectralResult {
  Partition partition;
  Eigen::MatrixXd u_hat;       // p x K leading eigenvectors
  Eigen::VectorXd eigenvalues; // descending, length K
  bool degenerate_gap = false; // lambda_K close to lambda_{K+1}
};

// Spectral clustering of a symmetric matrix: k-means on the rows of the
// top-K eigenvector matrix.
SpectralResult spectral_cluster(const Eigen::MatrixXd& sigma_tilde, int k,
                                std::uint64_t seed, int restarts = 20);

// Corrected Spectral Clustering: spectral clustering of
// sample_covariance(x) - diag(gamma_hat).
SpectralResult corrected_spectral(const Eigen::MatrixXd& x, int k,
                                  const GammaEstimate& gamma_hat,
                                  std::uint64_t seed);

// U U^t for the top-K eigenvectors; its objective <sigma_tilde, .> is the
// sum of the K largest eigenvalues.
Eigen::MatrixXd bbar(const Eigen::MatrixXd& sigma_tilde, int k,
                     bool* degenerate_gap = nullptr);

// tr(Sigma) / ||Sigma||_op, in [1, p].
double effective_rank(const Eigen::MatrixXd& sigma);

}  // namespace pecok
