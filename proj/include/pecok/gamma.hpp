#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <utility>
#include <vector>

namespace pecok {

enum class GammaMethod { main, simple, zero, oracle };

std::string to_string(GammaMethod method);
GammaMethod gamma_method_from_string(const std::string& name);

// Diagonal noise estimate. Values are kept raw (they can be negative);
// clipped() is the nonnegative view used where a scale is needed.
struct GammaEstimate {
  Eigen::VectorXd values;
  GammaMethod method = GammaMethod::zero;
  // Per-index chosen neighbors; second entry is -1 for the single-neighbor
  // estimator, both -1 for zero/oracle.
  std::vector<std::array<int, 2>> neighbors;

  Eigen::VectorXd clipped() const { return values.cwiseMax(0.0); }
  double sup_norm() const {
    return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  }

  static GammaEstimate zero(int p);
  static GammaEstimate oracle(const Eigen::VectorXd& gamma);
};

// V(a,b) = max_{c,d notin {a,b}} |<X_:a - X_:b, (X_:c - X_:d)/|X_:c - X_:d|_2>|
// with the convention 0/0 = 0.
double v_stat(const Eigen::MatrixXd& x, int a, int b);

// Two neighbors of a: argmin over b of V(a,b), then the runner-up.
// Ties are broken by smallest column index.
std::pair<int, int> neighbors(const Eigen::MatrixXd& x, int a);

// Gamma_aa = <X_:a - X_:ne1(a), X_:a - X_:ne2(a)> / n.
GammaEstimate estimate_gamma_main(const Eigen::MatrixXd& x);

// Single-neighbor variant: ne(a) minimizes max_c |<X_:a - X_:b, X_:c/|X_:c|_2>|,
// Gamma_aa = <X_:a - X_:ne(a), X_:a> / n.
GammaEstimate estimate_gamma_simple(const Eigen::MatrixXd& x);

}  // namespace pecok
