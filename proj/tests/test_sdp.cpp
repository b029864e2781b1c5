#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "helpers.hpp"
#include "pecok/model.hpp"
#include "pecok/rng.hpp"
#include "pecok/sdp.hpp"

using namespace pecok;

namespace {

// Independent oracle for the affine projections: solve the equality
// constrained least squares min |b - vec(M)|^2 s.t. A b = c with explicit
// symmetry, row-sum, and (optionally) trace constraints, via the KKT system.
Eigen::MatrixXd affine_projection_oracle(const Eigen::MatrixXd& m,
                                         std::optional<int> k) {
  const int p = static_cast<int>(m.rows());
  const int nvar = p * p;
  const int nsym = p * (p - 1) / 2;
  const int ncon = nsym + p + (k ? 1 : 0);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ncon, nvar);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(ncon);
  int row = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      a(row, i * p + j) = 1.0;
      a(row, j * p + i) = -1.0;
      ++row;
    }
  }
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(row, i * p + j) = 1.0;
    c[row] = 1.0;
    ++row;
  }
  if (k) {
    for (int i = 0; i < p; ++i) a(row, i * p + i) = 1.0;
    c[row] = *k;
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nvar + ncon, nvar + ncon);
  kkt.topLeftCorner(nvar, nvar).setIdentity();
  kkt.topRightCorner(nvar, ncon) = a.transpose();
  kkt.bottomLeftCorner(ncon, nvar) = a;
  Eigen::VectorXd rhs(nvar + ncon);
  rhs.head(nvar) = Eigen::Map<const Eigen::VectorXd>(m.data(), nvar);
  rhs.tail(ncon) = c;
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  // m.data() is column-major; the reshape below matches.
  return Eigen::Map<const Eigen::MatrixXd>(sol.data(), p, p);
}

// A random point of {B PSD, B1 = 1, B >= 0} (optionally with tr B = K).
Eigen::MatrixXd random_feasible(int p, std::optional<int> k, GaussianStream& rng) {
  const Eigen::MatrixXd raw = test::random_matrix(p, p, rng);
  return dykstra_project(0.3 * (raw + raw.transpose()) +
                             Eigen::MatrixXd::Constant(p, p, 1.0 / p),
                         k, 1e-11, 4000);
}

double worst_violation(const Eigen::MatrixXd& b, std::optional<int> k) {
  const int p = static_cast<int>(b.rows());
  double worst =
      (b.rowwise().sum() - Eigen::VectorXd::Ones(p)).cwiseAbs().maxCoeff();
  worst = std::max(worst, std::max(0.0, -b.minCoeff()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff()));
  if (k) worst = std::max(worst, std::abs(b.trace() - *k));
  return worst;
}

}  // namespace

TEST_CASE("psd projection") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  const Eigen::MatrixXd proj = project_psd(d);
  CHECK(proj(0, 0) == doctest::Approx(1.0));
  CHECK(proj(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(proj(0, 1)) < 1e-12);

  GaussianStream rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd m = test::random_matrix(5, 5, rng);
    const Eigen::MatrixXd once = project_psd(m);
    CHECK((project_psd(once) - once).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(once, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("affine projections satisfy their constraints") {
  GaussianStream rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd m = test::random_matrix(6, 6, rng);

    const Eigen::MatrixXd fixed = project_affine_fixed_k(m, 3);
    CHECK((fixed.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK(std::abs(fixed.trace() - 3.0) < 1e-10);
    CHECK((project_affine_fixed_k(fixed, 3) - fixed).cwiseAbs().maxCoeff() < 1e-9);

    const Eigen::MatrixXd rows = project_affine_rowsum(m);
    CHECK((rows.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK((project_affine_rowsum(rows) - rows).cwiseAbs().maxCoeff() < 1e-9);

    const Eigen::MatrixXd nn = project_nonneg(m);
    CHECK(nn.minCoeff() >= 0.0);
    CHECK((project_nonneg(nn) - nn).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("affine projections match the KKT oracle") {
  GaussianStream rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd m = test::random_matrix(4, 4, rng);
    CHECK((project_affine_fixed_k(m, 2) - affine_projection_oracle(m, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK((project_affine_rowsum(m) - affine_projection_oracle(m, std::nullopt))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
}

TEST_CASE("dykstra projection lands on the intersection") {
  GaussianStream rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd raw = test::random_matrix(6, 6, rng);
    for (std::optional<int> k : {std::optional<int>(2), std::optional<int>()}) {
      const Eigen::MatrixXd b = dykstra_project(raw, k, 1e-11, 4000);
      CHECK(worst_violation(b, k) < 1e-8);
      CHECK((dykstra_project(b, k, 1e-11, 4000) - b).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("population recovery at fixed K") {
  GaussianStream rng(17);
  SdpOptions opts;
  for (int trial = 0; trial < 5; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_below(2));
    const ModelSpec model = test::random_model(4 * k, k, 3, 1.0, rng);
    Eigen::MatrixXd s = build_sigma(model);
    s.diagonal() -= model.gamma;
    const SdpSolution sol = solve_fixed_k(s, k, opts);
    CHECK(sol.converged);
    const Eigen::MatrixXd bstar = build_bstar(model.partition);
    CHECK((sol.b_hat - bstar).norm() <= 1e-3);
    // A maximizer can never fall below the feasible reference point.
    CHECK(sol.objective >= (s.array() * bstar.array()).sum() - 10.0 * opts.eps_abs);
  }
}

TEST_CASE("K equal to p forces the identity") {
  GaussianStream rng(19);
  const ModelSpec model = test::random_model(6, 2, 3, 0.5, rng);
  const Eigen::MatrixXd s = build_sigma(model);
  const SdpSolution sol = solve_fixed_k(s, 6, SdpOptions{});
  CHECK(sol.converged);
  CHECK((sol.b_hat - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("converged solutions are feasible") {
  GaussianStream rng(23);
  SdpOptions opts;
  for (int trial = 0; trial < 5; ++trial) {
    const ModelSpec model = test::random_model(8, 2, 3, 0.5, rng);
    Eigen::MatrixXd s = build_sigma(model);
    s.diagonal() -= model.gamma;
    const SdpSolution sol = solve_fixed_k(s, 2, opts);
    CHECK(sol.converged);
    CHECK(worst_violation(sol.b_hat, 2) <= 10.0 * opts.eps_abs);
  }
}

TEST_CASE("adaptive solve with zero signal minimizes the trace") {
  const int p = 6;
  const Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
  const SdpSolution sol = solve_adaptive(s, 1.0, SdpOptions{});
  CHECK(sol.converged);
  // J/p is the unique trace minimizer of the row-stochastic PSD polytope.
  CHECK((sol.b_hat - Eigen::MatrixXd::Constant(p, p, 1.0 / p)).cwiseAbs().maxCoeff() <
        1e-4);

  GaussianStream rng(29);
  const double value = -1.0 * sol.b_hat.trace();
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd other = random_feasible(p, std::nullopt, rng);
    CHECK(value >= -1.0 * other.trace() - 1e-5);
  }
}

TEST_CASE("adaptive population recovery inside the penalty window") {
  const Partition g = Partition::contiguous(3, 4);  // p = 12, m = 4
  const double tau = 1.0;
  ModelSpec model{g, tau * Eigen::MatrixXd::Identity(3, 3),
                  Eigen::VectorXd::Ones(12)};
  Eigen::MatrixXd s = build_sigma(model);
  s.diagonal() -= model.gamma;
  const double delta = delta_separation(model.c);  // = 2 tau
  const double kappa = 4.0 * delta / 16.0;         // inside (0, m Delta / 8)
  const SdpSolution sol = solve_adaptive(s, kappa, SdpOptions{});
  CHECK(sol.converged);
  CHECK((sol.b_hat - build_bstar(g)).norm() <= 1e-3);
  CHECK(std::lround(sol.b_hat.trace()) == 3);
}

TEST_CASE("adaptive trace is nonincreasing in the penalty") {
  const Partition g = Partition::contiguous(2, 4);
  ModelSpec model{g, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(8)};
  Eigen::MatrixXd s = build_sigma(model);
  s.diagonal() -= model.gamma;
  double prev = std::numeric_limits<double>::infinity();
  for (double kappa : {0.25, 1.0, 4.0, 16.0}) {
    const SdpSolution sol = solve_adaptive(s, kappa, SdpOptions{});
    CHECK(sol.converged);
    CHECK(sol.b_hat.trace() <= prev + 1e-4);
    prev = sol.b_hat.trace();
  }
}

TEST_CASE("backends agree on the optimal value") {
  GaussianStream rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const ModelSpec model = test::random_model(6, 2, 3, 0.5, rng);
    Eigen::MatrixXd s = build_sigma(model);
    s.diagonal() -= model.gamma;

    SdpOptions admm;
    SdpOptions dyk;
    dyk.backend = SdpBackend::dykstra;
    dyk.eps_abs = 1e-5;
    const SdpSolution a = solve_fixed_k(s, 2, admm);
    const SdpSolution d = solve_fixed_k(s, 2, dyk);
    CHECK(a.converged);
    CHECK(d.converged);
    CHECK(std::abs(a.objective - d.objective) < 1e-4);
  }
}

TEST_CASE("kappa_hat arithmetic") {
  Eigen::VectorXd g1 = Eigen::VectorXd::Ones(4);
  CHECK(kappa_hat(GammaEstimate::oracle(g1), 4, 4) == doctest::Approx(10.0));

  Eigen::VectorXd g2 = Eigen::VectorXd::Constant(4, 2.0);
  CHECK(kappa_hat(GammaEstimate::oracle(g2), 16, 4) == doctest::Approx(7.5));

  CHECK(kappa_hat(GammaEstimate::oracle(3.0 * g1), 10, 5) ==
        doctest::Approx(3.0 * kappa_hat(GammaEstimate::oracle(g1), 10, 5)));
  CHECK_THROWS_AS(kappa_hat(GammaEstimate::oracle(g1), 0, 4), std::invalid_argument);
}

TEST_CASE("argument validation") {
  const Eigen::MatrixXd s = Eigen::MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(solve_fixed_k(s, 0, SdpOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(solve_fixed_k(s, 5, SdpOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(solve_adaptive(s, 0.0, SdpOptions{}), std::invalid_argument);

  Eigen::MatrixXd asym = s;
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(solve_fixed_k(asym, 2, SdpOptions{}), std::invalid_argument);
}
