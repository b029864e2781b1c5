#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "pecok/gamma.hpp"
#include "pecok/metrics.hpp"
#include "pecok/model.hpp"
#include "pecok/rng.hpp"
#include "pecok/spectral.hpp"

using namespace pecok;

namespace {

// Random element of {I >= B >= 0, tr B = K}: random orthogonal conjugation
// of a random admissible spectrum.
Eigen::MatrixXd random_fan_feasible(int p, int k, GaussianStream& rng) {
  Eigen::VectorXd lambda(p);
  while (true) {
    for (int i = 0; i < p; ++i) lambda[i] = rng.uniform01();
    lambda *= k / lambda.sum();
    if (lambda.maxCoeff() <= 1.0) break;
  }
  const Eigen::MatrixXd raw = test::random_matrix(p, p, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  const Eigen::MatrixXd q = qr.householderQ();
  return q * lambda.asDiagonal() * q.transpose();
}

}  // namespace

TEST_CASE("population input recovers the partition") {
  GaussianStream rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_below(3));
    const ModelSpec model = test::random_model(4 * k, k, 2, 0.5, rng);
    Eigen::MatrixXd s = build_sigma(model);
    s.diagonal() -= model.gamma;
    const SpectralResult res = spectral_cluster(s, k, mix64(10, trial));
    CHECK(exact_match(res.partition, model.partition));
    // Orthonormal eigenvector columns, eigenvalues descending.
    CHECK((res.u_hat.transpose() * res.u_hat - Eigen::MatrixXd::Identity(k, k))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    for (int j = 0; j + 1 < k; ++j) {
      CHECK(res.eigenvalues[j] >= res.eigenvalues[j + 1] - 1e-12);
    }
  }
}

TEST_CASE("K equal to p separates every variable") {
  GaussianStream rng(5);
  Eigen::MatrixXd s = test::random_psd(6, rng) + Eigen::MatrixXd::Identity(6, 6);
  const SpectralResult res = spectral_cluster(s, 6, 1);
  CHECK(res.partition.k() == 6);
  CHECK((res.u_hat * res.u_hat.transpose() - Eigen::MatrixXd::Identity(6, 6))
            .cwiseAbs()
            .maxCoeff() < 1e-9);
}

TEST_CASE("bbar on a diagonal matrix") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 3.0, 2.0, 1.0;
  bool degenerate = true;
  const Eigen::MatrixXd b = bbar(d, 2, &degenerate);
  CHECK_FALSE(degenerate);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 1.0;
  CHECK((b - expected).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((d.array() * b.array()).sum() == doctest::Approx(5.0));
}

TEST_CASE("bbar objective equals the top eigenvalue sum") {
  GaussianStream rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd raw = test::random_matrix(8, 8, rng);
    const Eigen::MatrixXd s = 0.5 * (raw + raw.transpose());
    const Eigen::MatrixXd b = bbar(s, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    const double top3 = es.eigenvalues().tail(3).sum();
    CHECK(std::abs((s.array() * b.array()).sum() - top3) < 1e-9);

    // Rank-K projection structure.
    CHECK((b * b - b).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(b.trace() == doctest::Approx(3.0).epsilon(1e-9));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(b, Eigen::EigenvaluesOnly);
    CHECK(eb.eigenvalues().maxCoeff() <= 1.0 + 1e-9);
    CHECK(eb.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("bbar dominates random feasible points") {
  GaussianStream rng(11);
  Eigen::MatrixXd raw = test::random_matrix(8, 8, rng);
  const Eigen::MatrixXd s = 0.5 * (raw + raw.transpose());
  const Eigen::MatrixXd b = bbar(s, 3);
  const double value = (s.array() * b.array()).sum();
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd other = random_fan_feasible(8, 3, rng);
    CHECK(value >= (s.array() * other.array()).sum() - 1e-9);
  }
}

TEST_CASE("degenerate eigengap is flagged") {
  bool degenerate = false;
  bbar(Eigen::MatrixXd::Identity(5, 5), 2, &degenerate);
  CHECK(degenerate);
  CHECK_THROWS_AS(bbar(Eigen::MatrixXd::Identity(5, 5), 6),
                  std::invalid_argument);
}

TEST_CASE("effective rank") {
  CHECK(effective_rank(Eigen::MatrixXd::Identity(7, 7)) == doctest::Approx(7.0));

  GaussianStream rng(13);
  Eigen::VectorXd v(5);
  for (int i = 0; i < 5; ++i) v[i] = rng.next();
  CHECK(effective_rank(v * v.transpose()) == doctest::Approx(1.0));

  // Block model with C = tau I: eigenvalues 1 + m tau (K times) and 1.
  const double tau = 3.0;
  const int m = 4, k = 3, p = m * k;
  ModelSpec model{Partition::contiguous(k, m),
                  tau * Eigen::MatrixXd::Identity(k, k), Eigen::VectorXd::Ones(p)};
  CHECK(effective_rank(build_sigma(model)) ==
        doctest::Approx(p * (1.0 + tau) / (1.0 + m * tau)));

  CHECK_THROWS_AS(effective_rank(Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("variable relabeling permutes the recovered partition") {
  GaussianStream rng(17);
  const ModelSpec model = test::random_model(10, 3, 2, 0.5, rng);
  Eigen::MatrixXd s = build_sigma(model);
  s.diagonal() -= model.gamma;

  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 9; i > 0; --i) {
    std::swap(perm[i], perm[rng.uniform_below(static_cast<std::uint64_t>(i) + 1)]);
  }
  Eigen::MatrixXd ps(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) ps(i, j) = s(perm[i], perm[j]);
  }

  const SpectralResult base = spectral_cluster(s, 3, 5);
  const SpectralResult permuted = spectral_cluster(ps, 3, 5);
  std::vector<int> relabeled(10);
  for (int i = 0; i < 10; ++i) relabeled[i] = base.partition.labels()[perm[i]];
  CHECK(exact_match(permuted.partition, Partition(relabeled)));
}

TEST_CASE("corrected spectral clustering at large separation") {
  const Partition g = Partition::contiguous(4, 10);  // p = 40
  ModelSpec model{g, 20.0 * Eigen::MatrixXd::Identity(4, 4),
                  Eigen::VectorXd::Ones(40)};
  int good = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const Eigen::MatrixXd x = sample(model, 500, mix64(900, seed));
    const GammaEstimate gamma_hat = estimate_gamma_main(x);
    const SpectralResult res = corrected_spectral(x, 4, gamma_hat, mix64(901, seed));
    if (lbar(res.partition, g) <= 0.05) ++good;
  }
  CHECK(good >= 45);
}
