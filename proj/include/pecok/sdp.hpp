#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "pecok/gamma.hpp"

namespace pecok {

enum class SdpBackend { admm, dykstra };

struct SdpOptions {
  int max_iters = 20000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-6;
  double rho = 1.0;
  SdpBackend backend = SdpBackend::admm;
};

struct SdpSolution {
  Eigen::MatrixXd b_hat;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  double objective = 0.0;
};

// Euclidean projections onto the pieces of the feasible sets.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m);
Eigen::MatrixXd project_affine_fixed_k(const Eigen::MatrixXd& m, int k);
Eigen::MatrixXd project_affine_rowsum(const Eigen::MatrixXd& m);
Eigen::MatrixXd project_nonneg(const Eigen::MatrixXd& m);

// Dykstra projection onto the intersection {PSD} n {affine} n {nonneg};
// the affine piece is fixed-trace when k is set, row-sum only otherwise.
Eigen::MatrixXd dykstra_project(const Eigen::MatrixXd& m, std::optional<int> k,
                                double tol = 1e-10, int max_cycles = 1000);

// argmax <s, B> over {B PSD, B1 = 1, B >= 0, tr B = K}.
SdpSolution solve_fixed_k(const Eigen::MatrixXd& s, int k, const SdpOptions& opts);

// argmax <s, B> - kappa tr(B) over the same polytope without the trace
// constraint.
SdpSolution solve_adaptive(const Eigen::MatrixXd& s, double kappa,
                           const SdpOptions& opts);

// Trace-penalty level: 5 |Gamma_hat|_inf (sqrt(p/n) + p/n).
double kappa_hat(const GammaEstimate& gamma_hat, int n, int p);

}  // namespace pecok
