#include "pecok/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pecok {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open CSV file: " + path);
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": malformed number at line " +
                                 std::to_string(line_no));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path + ": inconsistent column count at line " +
                               std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error(path + ": empty CSV");
  }
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

nlohmann::json model_to_json(const ModelSpec& model) {
  nlohmann::json j;
  j["labels"] = model.partition.labels();
  std::vector<std::vector<double>> c(model.c.rows());
  for (Eigen::Index i = 0; i < model.c.rows(); ++i) {
    c[i].assign(model.c.row(i).begin(), model.c.row(i).end());
  }
  j["C"] = c;
  j["gamma"] = std::vector<double>(model.gamma.begin(), model.gamma.end());
  return j;
}

ModelSpec model_from_json(const nlohmann::json& j) {
  const auto labels = j.at("labels").get<std::vector<int>>();
  const auto c_rows = j.at("C").get<std::vector<std::vector<double>>>();
  const auto gamma = j.at("gamma").get<std::vector<double>>();

  Eigen::MatrixXd c(c_rows.size(), c_rows.empty() ? 0 : c_rows.front().size());
  for (std::size_t i = 0; i < c_rows.size(); ++i) {
    if (c_rows[i].size() != c_rows.front().size()) {
      throw std::runtime_error("model JSON: ragged C matrix");
    }
    for (std::size_t k = 0; k < c_rows[i].size(); ++k) {
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = c_rows[i][k];
    }
  }
  ModelSpec model{Partition(labels), std::move(c),
                  Eigen::Map<const Eigen::VectorXd>(gamma.data(),
                                                    static_cast<Eigen::Index>(gamma.size()))};
  model.validate();
  return model;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open model JSON: " + path);
  }
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

nlohmann::json gamma_to_json(const GammaEstimate& est) {
  nlohmann::json j;
  j["method"] = to_string(est.method);
  j["values"] = std::vector<double>(est.values.begin(), est.values.end());
  j["neighbors"] = est.neighbors;
  return j;
}

GammaEstimate gamma_from_json(const nlohmann::json& j) {
  GammaEstimate est;
  est.method = gamma_method_from_string(j.at("method").get<std::string>());
  const auto values = j.at("values").get<std::vector<double>>();
  est.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                 static_cast<Eigen::Index>(values.size()));
  est.neighbors = j.at("neighbors").get<std::vector<std::array<int, 2>>>();
  return est;
}

nlohmann::json sdp_diagnostics_json(const SdpSolution& sol) {
  nlohmann::json j;
  j["iterations"] = sol.iterations;
  j["primal_residual"] = sol.primal_residual;
  j["dual_residual"] = sol.dual_residual;
  j["objective"] = sol.objective;
  j["converged"] = sol.converged;
  return j;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << body;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pecok
