#include "pecok/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace pecok {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

struct Feasibility {
  double rowsum_err = 0.0;
  double neg_entry = 0.0;
  double neg_eig = 0.0;
  double trace_err = 0.0;

  double worst() const {
    return std::max({rowsum_err, neg_entry, neg_eig, trace_err});
  }
};

Feasibility check_feasibility(const Eigen::MatrixXd& z, std::optional<int> k) {
  Feasibility f;
  const int p = static_cast<int>(z.rows());
  f.rowsum_err =
      (z * Eigen::VectorXd::Ones(p) - Eigen::VectorXd::Ones(p)).cwiseAbs().maxCoeff();
  f.neg_entry = std::max(0.0, -z.minCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z, Eigen::EigenvaluesOnly);
  f.neg_eig = std::max(0.0, -es.eigenvalues().minCoeff());
  if (k) f.trace_err = std::abs(z.trace() - *k);
  return f;
}

// Consensus ADMM with one copy per constraint set. The linear objective
// <s, .> enters through the consensus update.
SdpSolution admm_solve(const Eigen::MatrixXd& s_in, std::optional<int> k,
                       const SdpOptions& opts) {
  const Eigen::MatrixXd s = symmetrize(s_in);
  const int p = static_cast<int>(s.rows());
  const int num_sets = 3;

  auto project_affine = [&](const Eigen::MatrixXd& m) {
    return k ? project_affine_fixed_k(m, *k) : project_affine_rowsum(m);
  };

  Eigen::MatrixXd z = Eigen::MatrixXd::Constant(p, p, 1.0 / p);
  z = project_affine(z);
  Eigen::MatrixXd x1 = z, x2 = z, x3 = z;
  Eigen::MatrixXd u1 = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd u2 = u1, u3 = u1;

  double rho = opts.rho;
  SdpSolution sol;
  const int check_interval = 25;

  for (int it = 1; it <= opts.max_iters; ++it) {
    x1 = project_psd(z - u1);
    x2 = project_affine(z - u2);
    x3 = project_nonneg(z - u3);

    const Eigen::MatrixXd z_prev = z;
    z = ((x1 + u1) + (x2 + u2) + (x3 + u3)) / num_sets +
        s / (num_sets * rho);
    z = symmetrize(z);

    u1 += x1 - z;
    u2 += x2 - z;
    u3 += x3 - z;

    const double r = std::sqrt((x1 - z).squaredNorm() + (x2 - z).squaredNorm() +
                               (x3 - z).squaredNorm());
    const double sres =
        rho * std::sqrt(static_cast<double>(num_sets)) * (z - z_prev).norm();
    sol.iterations = it;
    sol.primal_residual = r;
    sol.dual_residual = sres;

    if (it % check_interval == 0 || it == opts.max_iters) {
      const double xnorm = std::sqrt(x1.squaredNorm() + x2.squaredNorm() +
                                     x3.squaredNorm());
      const double znorm = std::sqrt(static_cast<double>(num_sets)) * z.norm();
      const double unorm =
          std::sqrt(u1.squaredNorm() + u2.squaredNorm() + u3.squaredNorm());
      const double eps_pri = std::sqrt(3.0) * std::sqrt(static_cast<double>(p)) *
                                 opts.eps_abs +
                             opts.eps_rel * std::max(xnorm, znorm);
      const double eps_dual = std::sqrt(3.0) * std::sqrt(static_cast<double>(p)) *
                                  opts.eps_abs +
                              opts.eps_rel * rho * unorm;
      if (r <= eps_pri && sres <= eps_dual &&
          check_feasibility(z, k).worst() <= opts.eps_abs) {
        sol.converged = true;
        break;
      }
      // Residual balancing.
      if (r > 10.0 * sres && rho < 1e4) {
        rho *= 2.0;
        u1 /= 2.0;
        u2 /= 2.0;
        u3 /= 2.0;
      } else if (sres > 10.0 * r && rho > 1e-4) {
        rho /= 2.0;
        u1 *= 2.0;
        u2 *= 2.0;
        u3 *= 2.0;
      }
    }
  }

  sol.b_hat = z;
  sol.objective = (s.array() * z.array()).sum();
  return sol;
}

// Fixed-point iteration B <- P_C(B + alpha s); its fixed points are exactly
// the maximizers of <s, B> over the intersection, and the map is averaged,
// so the iterates converge for any alpha > 0.
SdpSolution dykstra_solve(const Eigen::MatrixXd& s_in, std::optional<int> k,
                          const SdpOptions& opts) {
  const Eigen::MatrixXd s = symmetrize(s_in);
  const int p = static_cast<int>(s.rows());
  const double smax = s.cwiseAbs().maxCoeff();

  Eigen::MatrixXd b =
      dykstra_project(Eigen::MatrixXd::Constant(p, p, 1.0 / p), k);
  SdpSolution sol;
  if (smax <= 0.0) {
    sol.b_hat = b;
    sol.converged = true;
    sol.objective = 0.0;
    return sol;
  }

  const double alpha = 1.0 / smax;
  const double tol = 0.1 * opts.eps_abs;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const Eigen::MatrixXd b_next =
        dykstra_project(b + alpha * s, k, 1e-11, 2000);
    const double change = (b_next - b).norm();
    b = b_next;
    sol.iterations = it;
    sol.primal_residual = change;
    if (change <= tol) {
      sol.converged = true;
      break;
    }
  }
  sol.b_hat = b;
  sol.objective = (s.array() * b.array()).sum();
  return sol;
}

SdpSolution solve(const Eigen::MatrixXd& s, std::optional<int> k,
                  const SdpOptions& opts) {
  if (s.rows() != s.cols()) {
    throw std::invalid_argument("sdp solve: matrix must be square");
  }
  if ((s - s.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("sdp solve: matrix must be symmetric");
  }
  return opts.backend == SdpBackend::admm ? admm_solve(s, k, opts)
                                          : dykstra_solve(s, k, opts);
}

}  // namespace

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("project_psd: eigendecomposition failed");
  }
  const Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd project_affine_fixed_k(const Eigen::MatrixXd& m_in, int k) {
  const Eigen::MatrixXd m = symmetrize(m_in);
  const int p = static_cast<int>(m.rows());
  if (p < 2) {
    throw std::invalid_argument("project_affine_fixed_k: requires p >= 2");
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p);
  const Eigen::VectorXd r = m * ones;
  const double total = r.sum();
  const double tr = m.trace();
  // Lagrange multipliers for B = M + mu 1^t + 1 mu^t + nu I subject to
  // B1 = 1 and tr(B) = K.
  const double s = (p - total - k + tr) / (2.0 * (p - 1));
  const double nu = (k - tr - 2.0 * s) / p;
  const Eigen::VectorXd mu = (ones - r - (s + nu) * ones) / p;
  return m + mu * ones.transpose() + ones * mu.transpose() +
         nu * Eigen::MatrixXd::Identity(p, p);
}

Eigen::MatrixXd project_affine_rowsum(const Eigen::MatrixXd& m_in) {
  const Eigen::MatrixXd m = symmetrize(m_in);
  const int p = static_cast<int>(m.rows());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p);
  const Eigen::VectorXd r = m * ones;
  const double s = (p - r.sum()) / (2.0 * p);
  const Eigen::VectorXd mu = (ones - r - s * ones) / p;
  return m + mu * ones.transpose() + ones * mu.transpose();
}

Eigen::MatrixXd project_nonneg(const Eigen::MatrixXd& m) {
  return symmetrize(m).cwiseMax(0.0);
}

Eigen::MatrixXd dykstra_project(const Eigen::MatrixXd& m, std::optional<int> k,
                                double tol, int max_cycles) {
  const int p = static_cast<int>(m.rows());
  Eigen::MatrixXd x = symmetrize(m);
  Eigen::MatrixXd q1 = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd q2 = q1, q3 = q1;
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    const Eigen::MatrixXd x_start = x;

    Eigen::MatrixXd y = project_psd(x + q1);
    q1 = x + q1 - y;
    x = y;

    y = k ? project_affine_fixed_k(x + q2, *k) : project_affine_rowsum(x + q2);
    q2 = x + q2 - y;
    x = y;

    y = project_nonneg(x + q3);
    q3 = x + q3 - y;
    x = y;

    if ((x - x_start).norm() <= tol) break;
  }
  return x;
}

SdpSolution solve_fixed_k(const Eigen::MatrixXd& s, int k, const SdpOptions& opts) {
  if (k < 1 || k > s.rows()) {
    throw std::invalid_argument("solve_fixed_k: K out of range");
  }
  return solve(s, k, opts);
}

SdpSolution solve_adaptive(const Eigen::MatrixXd& s, double kappa,
                           const SdpOptions& opts) {
  if (kappa <= 0.0) {
    throw std::invalid_argument("solve_adaptive: kappa must be positive");
  }
  const Eigen::MatrixXd shifted =
      s - kappa * Eigen::MatrixXd::Identity(s.rows(), s.cols());
  return solve(shifted, std::nullopt, opts);
}

double kappa_hat(const GammaEstimate& gamma_hat, int n, int p) {
  if (n < 1) throw std::invalid_argument("kappa_hat: n must be >= 1");
  const double ratio = static_cast<double>(p) / n;
  return 5.0 * gamma_hat.sup_norm() * (std::sqrt(ratio) + ratio);
}

}  // namespace pecok
