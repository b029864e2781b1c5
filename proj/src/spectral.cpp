#include "pecok/spectral.hpp"

#include <stdexcept>

#include "pecok/kmeans.hpp"
#include "pecok/model.hpp"

namespace pecok {

namespace {

struct TopK {
  Eigen::MatrixXd vectors;     // p x k, descending eigenvalue order
  Eigen::VectorXd values;      // length k
  bool degenerate_gap = false;
};

TopK top_eigenpairs(const Eigen::MatrixXd& sigma_tilde, int k) {
  const int p = static_cast<int>(sigma_tilde.rows());
  if (k < 1 || k > p) {
    throw std::invalid_argument("top_eigenpairs: K out of range");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (sigma_tilde + sigma_tilde.transpose()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("top_eigenpairs: eigendecomposition failed");
  }
  TopK out;
  out.vectors.resize(p, k);
  out.values.resize(k);
  // Eigen returns ascending order.
  for (int j = 0; j < k; ++j) {
    out.vectors.col(j) = es.eigenvectors().col(p - 1 - j);
    out.values[j] = es.eigenvalues()[p - 1 - j];
  }
  if (k < p && std::abs(es.eigenvalues()[p - k] - es.eigenvalues()[p - k - 1]) < 1e-10) {
    out.degenerate_gap = true;
  }
  return out;
}

}  // namespace

SpectralResult spectral_cluster(const Eigen::MatrixXd& sigma_tilde, int k,
                                std::uint64_t seed, int restarts) {
  const TopK top = top_eigenpairs(sigma_tilde, k);
  const KmeansResult km = kmeans(top.vectors, k, seed, restarts);
  return SpectralResult{Partition(km.labels), top.vectors, top.values,
                        top.degenerate_gap};
}

SpectralResult corrected_spectral(const Eigen::MatrixXd& x, int k,
                                  const GammaEstimate& gamma_hat,
                                  std::uint64_t seed) {
  Eigen::MatrixXd sigma_tilde = sample_covariance(x);
  sigma_tilde.diagonal() -= gamma_hat.values;
  return spectral_cluster(sigma_tilde, k, seed);
}

Eigen::MatrixXd bbar(const Eigen::MatrixXd& sigma_tilde, int k,
                     bool* degenerate_gap) {
  const TopK top = top_eigenpairs(sigma_tilde, k);
  if (degenerate_gap) *degenerate_gap = top.degenerate_gap;
  return top.vectors * top.vectors.transpose();
}

double effective_rank(const Eigen::MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (sigma + sigma.transpose()), Eigen::EigenvaluesOnly);
  const double op = es.eigenvalues().cwiseAbs().maxCoeff();
  if (op <= 0.0) {
    throw std::invalid_argument("effective_rank: zero matrix");
  }
  return sigma.trace() / op;
}

}  // namespace pecok
