#include "pecok/model.hpp"

#include <cmath>
#include <stdexcept>

#include "pecok/rng.hpp"

namespace pecok {

namespace {

// Factor L with L L^t = c, valid for PSD c (small negative eigenvalues are
// clipped to zero, tolerance 1e-10 relative to the largest one).
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("psd_factor: eigendecomposition failed");
  }
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd lambda = es.eigenvalues();
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < -1e-10 * scale) {
      throw std::invalid_argument("psd_factor: matrix is not PSD within tolerance");
    }
    lambda[i] = std::sqrt(std::max(lambda[i], 0.0));
  }
  return es.eigenvectors() * lambda.asDiagonal();
}

}  // namespace

void ModelSpec::validate(bool require_psd) const {
  const int p = partition.size();
  const int k = partition.k();
  if (c.rows() != k || c.cols() != k) {
    throw std::invalid_argument("ModelSpec: C must be K x K");
  }
  if (gamma.size() != p) {
    throw std::invalid_argument("ModelSpec: gamma length must match labels length");
  }
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("ModelSpec: C must be symmetric");
  }
  if (gamma.size() > 0 && gamma.minCoeff() < 0.0) {
    throw std::invalid_argument("ModelSpec: gamma entries must be nonnegative");
  }
  if (require_psd) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw std::invalid_argument("ModelSpec: C must be PSD for sampling");
    }
  }
}

Eigen::MatrixXd build_sigma(const ModelSpec& model) {
  model.validate();
  const int p = model.partition.size();
  const auto& labels = model.partition.labels();
  Eigen::MatrixXd sigma(p, p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      sigma(a, b) = model.c(labels[a], labels[b]);
    }
    sigma(a, a) += model.gamma[a];
  }
  return sigma;
}

Eigen::MatrixXd build_bstar(const Partition& partition) {
  const int p = partition.size();
  const auto& labels = partition.labels();
  const auto& sizes = partition.group_sizes();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  for (int a = 0; a < p; ++a) {
    for (int bcol = 0; bcol < p; ++bcol) {
      if (labels[a] == labels[bcol]) b(a, bcol) = 1.0 / sizes[labels[a]];
    }
  }
  return b;
}

double delta_separation(const Eigen::MatrixXd& c) {
  const int k = static_cast<int>(c.rows());
  if (k < 2) {
    throw std::invalid_argument("separation undefined for a single group");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      best = std::min(best, c(j, j) + c(l, l) - 2.0 * c(j, l));
    }
  }
  return best;
}

double mcord(const Eigen::MatrixXd& sigma, const Partition& partition) {
  const int p = partition.size();
  if (p < 3) {
    throw std::invalid_argument("mcord requires p >= 3");
  }
  if (partition.k() < 2) {
    throw std::invalid_argument("mcord requires at least two groups");
  }
  const auto& labels = partition.labels();
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      if (labels[a] == labels[b]) continue;
      double worst = 0.0;
      for (int c = 0; c < p; ++c) {
        if (c == a || c == b) continue;
        worst = std::max(worst, std::abs(sigma(a, c) - sigma(b, c)));
      }
      best = std::min(best, worst);
    }
  }
  return best;
}

Eigen::MatrixXd sample(const ModelSpec& model, int n, std::uint64_t seed) {
  model.validate(/*require_psd=*/true);
  if (n < 1) {
    throw std::invalid_argument("sample: n must be >= 1");
  }
  const int p = model.partition.size();
  const int k = model.partition.k();
  const auto& labels = model.partition.labels();
  const Eigen::MatrixXd l = psd_factor(model.c);
  const Eigen::VectorXd noise_sd = model.gamma.cwiseSqrt();

  GaussianStream g(seed);
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd zraw(k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) zraw[j] = g.next();
    const Eigen::VectorXd z = l * zraw;
    for (int a = 0; a < p; ++a) {
      x(i, a) = z[labels[a]] + noise_sd[a] * g.next();
    }
  }
  return x;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x, bool center) {
  const auto n = x.rows();
  if (n < 1 || (center && n < 2)) {
    throw std::invalid_argument("sample_covariance: too few rows");
  }
  if (!center) {
    return x.transpose() * x / static_cast<double>(n);
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(n);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> minimax_sigma_pair(double tau, int m,
                                                               int k) {
  if (tau <= 0.0 || m < 2 || k < 2) {
    throw std::invalid_argument("minimax_sigma_pair: need tau > 0, m >= 2, K >= 2");
  }
  const Partition g0 = Partition::contiguous(k, m);
  ModelSpec model{g0, tau * Eigen::MatrixXd::Identity(k, k),
                  Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k) * m)};
  const Eigen::MatrixXd sigma0 = build_sigma(model);

  // Swap indices 0 and m (the first member of group 0 and of group 1).
  const int p = k * m;
  Eigen::VectorXi perm = Eigen::VectorXi::LinSpaced(p, 0, p - 1);
  std::swap(perm[0], perm[m]);
  Eigen::MatrixXd sigma_swapped(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) sigma_swapped(i, j) = sigma0(perm[i], perm[j]);
  }
  return {sigma0, sigma_swapped};
}

double kl_closed_form(double tau, int m) {
  return 2.0 * (m - 1) * tau * tau / (1.0 + m * tau);
}

double kl_numeric(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma0) {
  if (sigma1.rows() != sigma0.rows() || sigma1.cols() != sigma0.cols()) {
    throw std::invalid_argument("kl_numeric: dimension mismatch");
  }
  const int p = static_cast<int>(sigma0.rows());
  const Eigen::LLT<Eigen::MatrixXd> llt0(sigma0);
  const Eigen::LLT<Eigen::MatrixXd> llt1(sigma1);
  if (llt0.info() != Eigen::Success || llt1.info() != Eigen::Success) {
    throw std::invalid_argument("kl_numeric: inputs must be positive definite");
  }
  const Eigen::MatrixXd ratio = llt0.solve(sigma1);  // (Sigma0)^{-1} Sigma1
  double logdet = 0.0;
  for (int i = 0; i < p; ++i) {
    logdet += 2.0 * (std::log(llt1.matrixLLT()(i, i)) - std::log(llt0.matrixLLT()(i, i)));
  }
  return 0.5 * (-logdet + ratio.trace() - p);
}

double separation_threshold(int n, int m, int p, int k) {
  if (n < 1 || m < 2 || p < 1 || k < 1) {
    throw std::invalid_argument("separation_threshold: invalid arguments");
  }
  const double logp = std::log(static_cast<double>(p));
  const double dn = n, dm = m, dp = p;
  return std::sqrt(logp / (dm * dn)) + std::sqrt(dp / (dn * dm * dm)) + logp / dn +
         dp / (dn * dm);
}

}  // namespace pecok
