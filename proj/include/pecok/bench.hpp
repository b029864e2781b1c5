#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pecok/gamma.hpp"
#include "pecok/sdp.hpp"

namespace pecok {

enum class Method {
  pecok,
  pecok_adaptive,
  uncorrected,
  csc,
  csc_uncorrected,
  cord_metric_only,
};

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct GridCell {
  int n = 0;
  int p = 0;
  int k = 0;
  int m = 0;
};

struct ExperimentConfig {
  std::vector<GridCell> cells;              // p = m*k for every cell
  std::vector<double> tau_multipliers;      // applied to separation_threshold
  std::vector<Method> methods;
  int replicates = 1;
  std::uint64_t base_seed = 0;
  GammaMethod gamma_method = GammaMethod::main;
  SdpOptions solver;

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct RecoveryRecord {
  GridCell cell;
  double tau_multiplier = 0.0;
  double tau = 0.0;
  Method method = Method::pecok;
  std::uint64_t seed = 0;
  bool exact = false;
  double lbar_value = 0.0;
  std::optional<double> bhat_dist;  // ||B_hat - B*||_F when applicable
  std::optional<double> tr_bhat;    // adaptive only
  std::optional<double> mcord_hat;  // cord_metric_only
  double wall_ms = 0.0;
  bool solver_converged = true;
};

// Runs the full grid; writes <out_dir>/records.csv, <out_dir>/summary.csv
// and a timestamped <out_dir>/run_info.json sidecar. Deterministic given
// base_seed: per-replicate seeds are mix64(base_seed, cell_index,
// replicate_index), independent of the method list.
std::vector<RecoveryRecord> run_phase(const ExperimentConfig& config,
                                      const std::string& out_dir);

std::string records_to_csv(const std::vector<RecoveryRecord>& records);
std::string summary_to_csv(const ExperimentConfig& config,
                           const std::vector<RecoveryRecord>& records);

// One replicate of one method on freshly sampled data; used by run_phase
// and exposed for the acceptance suite.
RecoveryRecord run_replicate(const GridCell& cell, double tau_multiplier,
                             Method method, std::uint64_t seed,
                             GammaMethod gamma_method, const SdpOptions& solver);

}  // namespace pecok
