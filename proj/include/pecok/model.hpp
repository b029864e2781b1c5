#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "pecok/partition.hpp"

namespace pecok {

// Latent covariance block model: Sigma = A C A^t + diag(gamma), where A is
// the 0/1 assignment matrix of the partition.
struct ModelSpec {
  Partition partition;
  Eigen::MatrixXd c;       // K x K latent covariance
  Eigen::VectorXd gamma;   // length-p noise variances

  // Throws std::invalid_argument on dimension mismatch, asymmetric c, or
  // negative gamma entries. require_psd additionally checks the spectrum
  // of c (tolerance 1e-10), as needed before sampling.
  void validate(bool require_psd = false) const;
};

// Sigma_ab = C_{k(a)k(b)} + 1_{a=b} gamma_a.
Eigen::MatrixXd build_sigma(const ModelSpec& model);

// Normalized partnership matrix: 1/|G_k| inside group k's diagonal block.
Eigen::MatrixXd build_bstar(const Partition& partition);

// Within-between covariance gap: min_{j<k} (C_jj + C_kk - 2 C_jk).
double delta_separation(const Eigen::MatrixXd& c);

// min over cross-group pairs (a,b) of max_{c != a,b} |Sigma_ac - Sigma_bc|.
double mcord(const Eigen::MatrixXd& sigma, const Partition& partition);

// n i.i.d. rows from N(0, Sigma), drawn as X = Z A^t + E with Z ~ N(0,C)
// and E ~ N(0, diag(gamma)). Deterministic given seed.
Eigen::MatrixXd sample(const ModelSpec& model, int n, std::uint64_t seed);

// X^t X / n; with center=true, column means are removed first (still /n).
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x, bool center = false);

// Minimax construction: Sigma0 from K contiguous groups of size m with
// C = tau I, Gamma = I; the second matrix swaps indices 0 and m.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> minimax_sigma_pair(double tau, int m,
                                                               int k);

// KL(N(0,Sigma^{(m+1)}) || N(0,Sigma^{(0)})) = 2 (m-1) tau^2 / (1 + m tau).
double kl_closed_form(double tau, int m);

// KL between centered Gaussians with covariances sigma1 (left) and sigma0.
double kl_numeric(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma0);

// Unit-constant sufficient separation rate:
// sqrt(log p/(mn)) + sqrt(p/(n m^2)) + log(p)/n + p/(nm).
double separation_threshold(int n, int m, int p, int k);

}  // namespace pecok
