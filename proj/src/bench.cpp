#include "pecok/bench.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pecok/io.hpp"
#include "pecok/kmeans.hpp"
#include "pecok/metrics.hpp"
#include "pecok/model.hpp"
#include "pecok/rng.hpp"
#include "pecok/spectral.hpp"

namespace pecok {

std::string to_string(Method method) {
  switch (method) {
    case Method::pecok: return "pecok";
    case Method::pecok_adaptive: return "pecok_adaptive";
    case Method::uncorrected: return "uncorrected";
    case Method::csc: return "csc";
    case Method::csc_uncorrected: return "csc_uncorrected";
    case Method::cord_metric_only: return "cord_metric_only";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "pecok") return Method::pecok;
  if (name == "pecok_adaptive") return Method::pecok_adaptive;
  if (name == "uncorrected") return Method::uncorrected;
  if (name == "csc") return Method::csc;
  if (name == "csc_uncorrected") return Method::csc_uncorrected;
  if (name == "cord_metric_only") return Method::cord_metric_only;
  throw std::invalid_argument("unknown method: " + name);
}

void ExperimentConfig::validate() const {
  if (replicates < 1) {
    throw std::invalid_argument("config: replicates must be >= 1");
  }
  if (cells.empty() || tau_multipliers.empty() || methods.empty()) {
    throw std::invalid_argument("config: empty grid, multipliers, or methods");
  }
  for (const auto& cell : cells) {
    if (cell.m < 2 || cell.k < 1 || cell.m * cell.k > cell.p || cell.n < 2) {
      throw std::invalid_argument("config: invalid grid cell (need m >= 2, m*k <= p, n >= 2)");
    }
  }
  for (double mult : tau_multipliers) {
    if (mult < 0.0) {
      throw std::invalid_argument("config: tau multipliers must be >= 0");
    }
  }
}

namespace {

template <typename T>
std::vector<T> as_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  if (j.contains("cells")) {
    for (const auto& jc : j.at("cells")) {
      GridCell cell;
      cell.n = jc.at("n").get<int>();
      cell.k = jc.at("k").get<int>();
      cell.m = jc.at("m").get<int>();
      cell.p = jc.contains("p") ? jc.at("p").get<int>() : cell.m * cell.k;
      config.cells.push_back(cell);
    }
  } else {
    for (int n : as_list<int>(j.at("n"))) {
      for (int k : as_list<int>(j.at("k"))) {
        for (int m : as_list<int>(j.at("m"))) {
          config.cells.push_back({n, m * k, k, m});
        }
      }
    }
  }
  config.tau_multipliers = as_list<double>(j.at("tau_multipliers"));
  for (const auto& name : j.at("methods").get<std::vector<std::string>>()) {
    config.methods.push_back(method_from_string(name));
  }
  config.replicates = j.value("replicates", 1);
  config.base_seed = j.value("base_seed", std::uint64_t{0});
  config.gamma_method = gamma_method_from_string(j.value("gamma_method", "main"));
  if (j.contains("solver")) {
    const auto& js = j.at("solver");
    config.solver.max_iters = js.value("max_iters", config.solver.max_iters);
    config.solver.eps_abs = js.value("eps_abs", config.solver.eps_abs);
    config.solver.eps_rel = js.value("eps_rel", config.solver.eps_rel);
    config.solver.rho = js.value("rho", config.solver.rho);
    const std::string backend = js.value("backend", "admm");
    if (backend == "admm") {
      config.solver.backend = SdpBackend::admm;
    } else if (backend == "dykstra") {
      config.solver.backend = SdpBackend::dykstra;
    } else {
      throw std::invalid_argument("config: unknown solver backend: " + backend);
    }
  }
  config.validate();
  return config;
}

namespace {

GammaEstimate pick_gamma(GammaMethod gm, const Eigen::MatrixXd& x,
                         const ModelSpec& model) {
  switch (gm) {
    case GammaMethod::main: return estimate_gamma_main(x);
    case GammaMethod::simple: return estimate_gamma_simple(x);
    case GammaMethod::zero: return GammaEstimate::zero(static_cast<int>(x.cols()));
    case GammaMethod::oracle: return GammaEstimate::oracle(model.gamma);
  }
  throw std::logic_error("pick_gamma: unreachable");
}

Partition round_bhat(const Eigen::MatrixXd& b_hat, int k, std::uint64_t seed) {
  return Partition(kmeans(b_hat, k, mix64(seed, 0x726f756e64ULL)).labels);
}

}  // namespace

RecoveryRecord run_replicate(const GridCell& cell, double tau_multiplier,
                             Method method, std::uint64_t seed,
                             GammaMethod gamma_method, const SdpOptions& solver) {
  const double tau =
      tau_multiplier * separation_threshold(cell.n, cell.m, cell.p, cell.k);
  const Partition truth = Partition::contiguous(cell.k, cell.m);
  const ModelSpec model{truth, tau * Eigen::MatrixXd::Identity(cell.k, cell.k),
                        Eigen::VectorXd::Ones(cell.p)};

  RecoveryRecord rec;
  rec.cell = cell;
  rec.tau_multiplier = tau_multiplier;
  rec.tau = tau;
  rec.method = method;
  rec.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::MatrixXd x = sample(model, cell.n, seed);
  const Eigen::MatrixXd sigma_hat = sample_covariance(x);

  auto finish = [&](const Partition& estimated) {
    const ComparisonReport report = compare_partitions(estimated, truth);
    rec.exact = report.exact;
    rec.lbar_value = report.lbar_value;
  };

  switch (method) {
    case Method::pecok:
    case Method::uncorrected: {
      const GammaEstimate gamma_hat =
          method == Method::uncorrected
              ? GammaEstimate::zero(cell.p)
              : pick_gamma(gamma_method, x, model);
      Eigen::MatrixXd s = sigma_hat;
      s.diagonal() -= gamma_hat.values;
      const SdpSolution sol = solve_fixed_k(s, cell.k, solver);
      rec.solver_converged = sol.converged;
      rec.bhat_dist = (sol.b_hat - build_bstar(truth)).norm();
      finish(round_bhat(sol.b_hat, cell.k, seed));
      break;
    }
    case Method::pecok_adaptive: {
      const GammaEstimate gamma_hat = pick_gamma(gamma_method, x, model);
      Eigen::MatrixXd s = sigma_hat;
      s.diagonal() -= gamma_hat.values;
      const double kappa = kappa_hat(gamma_hat, cell.n, cell.p);
      const SdpSolution sol = solve_adaptive(s, kappa, solver);
      rec.solver_converged = sol.converged;
      rec.tr_bhat = sol.b_hat.trace();
      rec.bhat_dist = (sol.b_hat - build_bstar(truth)).norm();
      const int k_hat = std::clamp(
          static_cast<int>(std::lround(sol.b_hat.trace())), 1, cell.p);
      finish(round_bhat(sol.b_hat, k_hat, seed));
      break;
    }
    case Method::csc:
    case Method::csc_uncorrected: {
      const GammaEstimate gamma_hat =
          method == Method::csc_uncorrected
              ? GammaEstimate::zero(cell.p)
              : pick_gamma(gamma_method, x, model);
      const SpectralResult res =
          corrected_spectral(x, cell.k, gamma_hat, mix64(seed, 0x637363ULL));
      finish(res.partition);
      break;
    }
    case Method::cord_metric_only: {
      rec.mcord_hat = mcord(sigma_hat, truth);
      rec.exact = false;
      rec.lbar_value = 0.0;
      break;
    }
  }

  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string records_to_csv(const std::vector<RecoveryRecord>& records) {
  std::ostringstream out;
  out << "# pecok-records v1\n";
  out << "n,p,k,m,tau_multiplier,tau,method,seed,exact,lbar,bhat_dist,tr_bhat,"
         "mcord,solver_converged\n";
  for (const auto& r : records) {
    out << r.cell.n << ',' << r.cell.p << ',' << r.cell.k << ',' << r.cell.m << ','
        << format_double(r.tau_multiplier) << ',' << format_double(r.tau) << ','
        << to_string(r.method) << ',' << r.seed << ',' << (r.exact ? 1 : 0) << ','
        << format_double(r.lbar_value) << ',' << opt_str(r.bhat_dist) << ','
        << opt_str(r.tr_bhat) << ',' << opt_str(r.mcord_hat) << ','
        << (r.solver_converged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string summary_to_csv(const ExperimentConfig& config,
                           const std::vector<RecoveryRecord>& records) {
  struct Agg {
    int count = 0;
    int exact = 0;
    double lbar_sum = 0.0;
    double mcord_sum = 0.0;
    int mcord_count = 0;
  };
  // key: cell index within config order, multiplier index, method index
  std::map<std::tuple<int, int, int>, Agg> agg;
  auto cell_index = [&](const GridCell& c) {
    for (std::size_t i = 0; i < config.cells.size(); ++i) {
      const auto& cc = config.cells[i];
      if (cc.n == c.n && cc.p == c.p && cc.k == c.k && cc.m == c.m) {
        return static_cast<int>(i);
      }
    }
    return -1;
  };
  auto mult_index = [&](double mult) {
    for (std::size_t i = 0; i < config.tau_multipliers.size(); ++i) {
      if (config.tau_multipliers[i] == mult) return static_cast<int>(i);
    }
    return -1;
  };
  auto method_index = [&](Method m) {
    for (std::size_t i = 0; i < config.methods.size(); ++i) {
      if (config.methods[i] == m) return static_cast<int>(i);
    }
    return -1;
  };
  for (const auto& r : records) {
    Agg& a = agg[{cell_index(r.cell), mult_index(r.tau_multiplier),
                  method_index(r.method)}];
    ++a.count;
    a.exact += r.exact ? 1 : 0;
    a.lbar_sum += r.lbar_value;
    if (r.mcord_hat) {
      a.mcord_sum += *r.mcord_hat;
      ++a.mcord_count;
    }
  }

  std::ostringstream out;
  out << "# pecok-summary v1\n";
  out << "n,p,k,m,tau_multiplier,method,replicates,recovery_freq,recovery_se,"
         "mean_lbar,mean_mcord\n";
  for (const auto& [key, a] : agg) {
    const auto& [ci, mi, methi] = key;
    const GridCell& cell = config.cells[ci];
    const double mult = config.tau_multipliers[mi];
    const Method method = config.methods[methi];
    const double freq = static_cast<double>(a.exact) / a.count;
    const double se = std::sqrt(freq * (1.0 - freq) / a.count);
    out << cell.n << ',' << cell.p << ',' << cell.k << ',' << cell.m << ','
        << format_double(mult) << ',' << to_string(method) << ',' << a.count << ','
        << format_double(freq) << ',' << format_double(se) << ','
        << format_double(a.lbar_sum / a.count) << ','
        << (a.mcord_count ? format_double(a.mcord_sum / a.mcord_count)
                          : std::string())
        << '\n';
  }
  return out.str();
}

std::vector<RecoveryRecord> run_phase(const ExperimentConfig& config,
                                      const std::string& out_dir) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  // Fail before any work if the directory is not writable.
  const std::string probe = out_dir + "/.write_probe";
  write_text_file(probe, "");
  std::filesystem::remove(probe);

  std::vector<RecoveryRecord> records;
  records.reserve(config.cells.size() * config.tau_multipliers.size() *
                  config.methods.size() * config.replicates);

  int flat_cell = 0;
  for (const auto& cell : config.cells) {
    for (double mult : config.tau_multipliers) {
      for (Method method : config.methods) {
        for (int rep = 0; rep < config.replicates; ++rep) {
          const std::uint64_t seed =
              mix64(config.base_seed, static_cast<std::uint64_t>(flat_cell),
                    static_cast<std::uint64_t>(rep));
          records.push_back(run_replicate(cell, mult, method, seed,
                                          config.gamma_method, config.solver));
        }
      }
      ++flat_cell;
    }
  }

  write_text_file(out_dir + "/records.csv", records_to_csv(records));
  write_text_file(out_dir + "/summary.csv", summary_to_csv(config, records));

  // Timing and timestamp sidecar; everything non-deterministic lives here.
  {
    std::ostringstream timing;
    timing << "n,p,k,m,tau_multiplier,method,seed,wall_ms\n";
    for (const auto& r : records) {
      timing << r.cell.n << ',' << r.cell.p << ',' << r.cell.k << ',' << r.cell.m
             << ',' << format_double(r.tau_multiplier) << ',' << to_string(r.method)
             << ',' << r.seed << ',' << format_double(r.wall_ms) << '\n';
    }
    write_text_file(out_dir + "/timings.csv", timing.str());

    nlohmann::json info;
    info["finished_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    info["records"] = records.size();
    write_text_file(out_dir + "/run_info.json", info.dump(2) + "\n");
  }
  return records;
}

}  // namespace pecok
