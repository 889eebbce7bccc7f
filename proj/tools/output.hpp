// output.hpp - CSV and JSON writers with deterministic formatting.

#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace mlz::cli {

/// 17 significant digits (%.17g), so every double round-trips.
std::string format_real(double x);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

/// Row-major CSV of P(a, b) with a header "final,from_1,...,from_N" and the
/// 1-based final level leading each row.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& p);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Pretty-printed JSON followed by a newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// JSON array of rows; non-finite entries become null.
nlohmann::json matrix_json(const Eigen::MatrixXd& m);

/// Number or null for non-finite values.
nlohmann::json real_json(double x);

std::vector<double> to_vector(const Eigen::VectorXd& v);

}  // namespace mlz::cli
