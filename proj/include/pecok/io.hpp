#pragma once

#include <Eigen/Dense>
#include <string>

#include "json.hpp"
#include "pecok/gamma.hpp"
#include "pecok/model.hpp"
#include "pecok/sdp.hpp"

namespace pecok {

// All numeric text output uses 17 significant digits.
std::string format_double(double value);

// Dense CSV, one row per line, comma separated.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

// Throws std::runtime_error with the offending line number on malformed
// input.
Eigen::MatrixXd read_matrix_csv(const std::string& path);

nlohmann::json model_to_json(const ModelSpec& model);
ModelSpec model_from_json(const nlohmann::json& j);
ModelSpec load_model(const std::string& path);

nlohmann::json gamma_to_json(const GammaEstimate& est);
GammaEstimate gamma_from_json(const nlohmann::json& j);

nlohmann::json sdp_diagnostics_json(const SdpSolution& sol);

void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

}  // namespace pecok
