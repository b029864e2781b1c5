#pragma once

#include <vector>

#include "pecok/partition.hpp"

namespace pecok {

struct ComparisonReport {
  bool exact = false;
  double lbar_value = 0.0;
  std::vector<int> matched_permutation;  // true group k -> estimated group
  int k_true = 0;
  int k_est = 0;
};

// True iff canonical forms agree (label-permutation invariant).
bool exact_match(const Partition& g_est, const Partition& g_true);

// Permutation-minimized sum of per-group miss-assignment ratios
// min_sigma sum_k |G*_k \ G_hat_sigma(k)| / m, with m the smallest true
// group. Group counts may differ; the smaller side is padded with empty
// groups before matching.
double lbar(const Partition& g_est, const Partition& g_true);

ComparisonReport compare_partitions(const Partition& g_est, const Partition& g_true);

}  // namespace pecok
