#include "pecok/gamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pecok {

std::string to_string(GammaMethod method) {
  switch (method) {
    case GammaMethod::main: return "main";
    case GammaMethod::simple: return "simple";
    case GammaMethod::zero: return "zero";
    case GammaMethod::oracle: return "oracle";
  }
  return "unknown";
}

GammaMethod gamma_method_from_string(const std::string& name) {
  if (name == "main") return GammaMethod::main;
  if (name == "simple") return GammaMethod::simple;
  if (name == "zero") return GammaMethod::zero;
  if (name == "oracle") return GammaMethod::oracle;
  throw std::invalid_argument("unknown gamma method: " + name);
}

GammaEstimate GammaEstimate::zero(int p) {
  GammaEstimate est;
  est.values = Eigen::VectorXd::Zero(p);
  est.method = GammaMethod::zero;
  est.neighbors.assign(p, {-1, -1});
  return est;
}

GammaEstimate GammaEstimate::oracle(const Eigen::VectorXd& gamma) {
  GammaEstimate est;
  est.values = gamma;
  est.method = GammaMethod::oracle;
  est.neighbors.assign(static_cast<std::size_t>(gamma.size()), {-1, -1});
  return est;
}

namespace {

// All inner products below reduce to Gram matrix entries:
// <X_:a - X_:b, X_:c - X_:d> = G_ac - G_ad - G_bc + G_bd.
struct GramView {
  explicit GramView(const Eigen::MatrixXd& x) : gram(x.transpose() * x) {}

  // V(a,b) for one pair, O(p^2) given the Gram matrix.
  double v(int a, int b) const {
    const int p = static_cast<int>(gram.rows());
    double best = 0.0;
    for (int c = 0; c < p; ++c) {
      if (c == a || c == b) continue;
      const double uc = gram(a, c) - gram(b, c);
      for (int d = c + 1; d < p; ++d) {
        if (d == a || d == b) continue;
        const double ud = gram(a, d) - gram(b, d);
        const double sq = gram(c, c) + gram(d, d) - 2.0 * gram(c, d);
        if (sq <= 0.0) continue;  // identical columns, 0/0 = 0
        best = std::max(best, std::abs(uc - ud) / std::sqrt(sq));
      }
    }
    return best;
  }

  // max_{c notin {a,b}} |<X_:a - X_:b, X_:c>| / |X_:c|_2.
  double v_simple(int a, int b) const {
    const int p = static_cast<int>(gram.rows());
    double best = 0.0;
    for (int c = 0; c < p; ++c) {
      if (c == a || c == b) continue;
      if (gram(c, c) <= 0.0) continue;
      best = std::max(best,
                      std::abs(gram(a, c) - gram(b, c)) / std::sqrt(gram(c, c)));
    }
    return best;
  }

  Eigen::MatrixXd gram;
};

void check_pair(const Eigen::MatrixXd& x, int a, int b) {
  const int p = static_cast<int>(x.cols());
  if (p < 3) throw std::invalid_argument("v_stat: requires p >= 3");
  if (a < 0 || b < 0 || a >= p || b >= p) {
    throw std::out_of_range("v_stat: column index out of range");
  }
  if (a == b) throw std::invalid_argument("v_stat: a and b must differ");
}

// argmin with smallest-index tie break, skipping excluded indices.
int argmin_row(const Eigen::VectorXd& row, int skip1, int skip2) {
  int best = -1;
  double best_val = std::numeric_limits<double>::infinity();
  for (int b = 0; b < row.size(); ++b) {
    if (b == skip1 || b == skip2) continue;
    if (row[b] < best_val) {
      best_val = row[b];
      best = b;
    }
  }
  return best;
}

}  // namespace

double v_stat(const Eigen::MatrixXd& x, int a, int b) {
  check_pair(x, a, b);
  return GramView(x).v(a, b);
}

std::pair<int, int> neighbors(const Eigen::MatrixXd& x, int a) {
  const int p = static_cast<int>(x.cols());
  if (p < 3) throw std::invalid_argument("neighbors: requires p >= 3");
  const GramView gv(x);
  Eigen::VectorXd row(p);
  for (int b = 0; b < p; ++b) row[b] = (b == a) ? 0.0 : gv.v(a, b);
  const int ne1 = argmin_row(row, a, -1);
  const int ne2 = argmin_row(row, a, ne1);
  return {ne1, ne2};
}

GammaEstimate estimate_gamma_main(const Eigen::MatrixXd& x) {
  const int p = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows());
  if (p < 3) throw std::invalid_argument("estimate_gamma_main: requires p >= 3");
  if (n < 1) throw std::invalid_argument("estimate_gamma_main: requires n >= 1");

  const GramView gv(x);
  GammaEstimate est;
  est.method = GammaMethod::main;
  est.values.resize(p);
  est.neighbors.resize(p);
  Eigen::VectorXd row(p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) row[b] = (b == a) ? 0.0 : gv.v(a, b);
    const int ne1 = argmin_row(row, a, -1);
    const int ne2 = argmin_row(row, a, ne1);
    est.neighbors[a] = {ne1, ne2};
    est.values[a] = (gv.gram(a, a) - gv.gram(a, ne1) - gv.gram(a, ne2) +
                     gv.gram(ne1, ne2)) /
                    n;
  }
  return est;
}

GammaEstimate estimate_gamma_simple(const Eigen::MatrixXd& x) {
  const int p = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows());
  if (p < 3) throw std::invalid_argument("estimate_gamma_simple: requires p >= 3");
  if (n < 1) throw std::invalid_argument("estimate_gamma_simple: requires n >= 1");

  const GramView gv(x);
  GammaEstimate est;
  est.method = GammaMethod::simple;
  est.values.resize(p);
  est.neighbors.resize(p);
  Eigen::VectorXd row(p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) row[b] = (b == a) ? 0.0 : gv.v_simple(a, b);
    const int ne = argmin_row(row, a, -1);
    est.neighbors[a] = {ne, -1};
    est.values[a] = (gv.gram(a, a) - gv.gram(a, ne)) / n;
  }
  return est;
}

}  // namespace pecok
