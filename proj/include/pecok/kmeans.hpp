#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace pecok {

struct KmeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // K x q
  double objective = 0.0;   // sum of squared distances to assigned centers
  int restarts_used = 0;
};

// Best-of-restarts Lloyd iterations from kmeans++ seeds. Rows of points are
// the items. Deterministic given seed.
KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts = 20);

}  // namespace pecok
