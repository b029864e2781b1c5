#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "json.hpp"
#include "pecok/bench.hpp"
#include "pecok/io.hpp"
#include "pecok/kmeans.hpp"
#include "pecok/model.hpp"
#include "pecok/rng.hpp"
#include "pecok/sdp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

int cmd_simulate(const std::string& model_path, int n, std::uint64_t seed,
                 const std::string& out_path) {
  const pecok::ModelSpec model = pecok::load_model(model_path);
  const Eigen::MatrixXd x = pecok::sample(model, n, seed);
  pecok::write_matrix_csv(x, out_path);
  return kExitOk;
}

int cmd_cluster(const std::string& in_path, int k, bool adaptive,
                const std::string& gamma_name, double solver_tol,
                std::uint64_t seed, const std::string& out_path) {
  const Eigen::MatrixXd x = pecok::read_matrix_csv(in_path);
  if (x.rows() < 2 || x.cols() < 3) {
    throw std::runtime_error("cluster: input must have n >= 2 rows and p >= 3 columns");
  }
  const int p = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows());

  pecok::GammaEstimate gamma_hat = pecok::GammaEstimate::zero(p);
  const pecok::GammaMethod gm = pecok::gamma_method_from_string(gamma_name);
  if (gm == pecok::GammaMethod::main) {
    gamma_hat = pecok::estimate_gamma_main(x);
  } else if (gm == pecok::GammaMethod::simple) {
    gamma_hat = pecok::estimate_gamma_simple(x);
  } else if (gm == pecok::GammaMethod::oracle) {
    throw std::runtime_error("cluster: oracle gamma requires a known model; use the phase harness");
  }

  Eigen::MatrixXd s = pecok::sample_covariance(x);
  s.diagonal() -= gamma_hat.values;

  pecok::SdpOptions opts;
  opts.eps_abs = opts.eps_rel = solver_tol;

  pecok::SdpSolution sol;
  int k_used = k;
  double kappa = 0.0;
  if (adaptive) {
    kappa = pecok::kappa_hat(gamma_hat, n, p);
    sol = pecok::solve_adaptive(s, kappa, opts);
    k_used = std::clamp(static_cast<int>(std::lround(sol.b_hat.trace())), 1, p);
  } else {
    sol = pecok::solve_fixed_k(s, k, opts);
  }
  const pecok::KmeansResult km =
      pecok::kmeans(sol.b_hat, k_used, pecok::mix64(seed, 0x726f756e64ULL));
  const pecok::Partition partition(km.labels);

  nlohmann::json out;
  out["labels"] = partition.labels();
  out["K"] = partition.k();
  out["method"] = adaptive ? "pecok_adaptive" : "pecok";
  out["gamma_method"] = gamma_name;
  if (adaptive) {
    out["tr_bhat"] = sol.b_hat.trace();
    out["kappa"] = kappa;
  }
  out["solver"] = pecok::sdp_diagnostics_json(sol);
  pecok::write_text_file(out_path, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_phase(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) {
    throw std::runtime_error("cannot open config: " + config_path);
  }
  nlohmann::json j;
  in >> j;
  const pecok::ExperimentConfig config = pecok::ExperimentConfig::from_json(j);
  pecok::run_phase(config, out_dir);
  return kExitOk;
}

int cmd_klcheck(double tau, int m, int k) {
  std::cout << "tau,m,closed_form,numeric,abs_diff\n";
  const double closed = pecok::kl_closed_form(tau, m);
  double numeric = 0.0;
  if (tau > 0.0) {
    const auto [sigma0, sigma_swapped] = pecok::minimax_sigma_pair(tau, m, k);
    numeric = pecok::kl_numeric(sigma_swapped, sigma0);
  }
  std::cout << pecok::format_double(tau) << ',' << m << ','
            << pecok::format_double(closed) << ',' << pecok::format_double(numeric)
            << ',' << pecok::format_double(std::abs(closed - numeric)) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PECOK variable clustering: SDP-corrected K-means, spectral baseline, and a Monte-Carlo phase harness"};
  app.require_subcommand(1);

  // simulate
  std::string model_path, out_path;
  int sim_n = 100;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Sample an n x p data CSV from a model JSON");
  simulate->add_option("--model", model_path, "model JSON {labels, C, gamma}")->required();
  simulate->add_option("--n", sim_n, "number of rows")->required();
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--out", out_path, "output CSV path")->required();

  // cluster
  std::string in_path, cluster_out, gamma_name = "main";
  int k = 0;
  bool adaptive = false;
  double solver_tol = 1e-6;
  std::uint64_t cluster_seed = 0;
  auto* cluster = app.add_subcommand("cluster", "Cluster the columns of a data CSV");
  cluster->add_option("--in", in_path, "input data CSV")->required();
  auto* k_opt = cluster->add_option("--k", k, "number of clusters");
  auto* adaptive_flag = cluster->add_flag("--adaptive", adaptive, "select K via the trace penalty");
  cluster->add_option("--gamma", gamma_name, "gamma estimator: main|simple|zero")
      ->check(CLI::IsMember({"main", "simple", "zero"}));
  cluster->add_option("--solver-tol", solver_tol, "SDP residual tolerance");
  cluster->add_option("--seed", cluster_seed, "rounding seed");
  cluster->add_option("--out", cluster_out, "output JSON path")->required();
  k_opt->excludes(adaptive_flag);

  // phase
  std::string config_path, phase_out;
  auto* phase = app.add_subcommand("phase", "Run a Monte-Carlo recovery grid");
  phase->add_option("--config", config_path, "experiment config JSON")->required();
  phase->add_option("--out", phase_out, "output directory")->required();

  // klcheck
  double tau = 1.0;
  int kl_m = 2, kl_k = 2;
  auto* klcheck = app.add_subcommand("klcheck", "Closed-form vs numeric KL for the minimax pair");
  klcheck->add_option("--tau", tau, "latent variance")->required();
  klcheck->add_option("--m", kl_m, "group size")->required();
  klcheck->add_option("--k", kl_k, "group count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(model_path, sim_n, seed, out_path);
    if (*cluster) {
      if (!adaptive && k_opt->count() == 0) {
        std::cerr << "cluster: either --k or --adaptive is required\n";
        return kExitUsage;
      }
      return cmd_cluster(in_path, k, adaptive, gamma_name, solver_tol,
                         cluster_seed, cluster_out);
    }
    if (*phase) return cmd_phase(config_path, phase_out);
    if (*klcheck) return cmd_klcheck(tau, kl_m, kl_k);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return std::string(e.what()).find("eigendecomposition") != std::string::npos
               ? kExitSolver
               : kExitData;
  }
  return kExitUsage;
}
