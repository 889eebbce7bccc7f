#include "output.hpp"

#include "mlz/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mlz::cli {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& p) {
  std::ostringstream out;
  out << "final";
  for (Eigen::Index b = 0; b < p.cols(); ++b) out << ",from_" << b + 1;
  out << '\n';
  for (Eigen::Index a = 0; a < p.rows(); ++a) {
    out << a + 1;
    for (Eigen::Index b = 0; b < p.cols(); ++b) out << ',' << format_real(p(a, b));
    out << '\n';
  }
  write_text(path, out.str());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

nlohmann::json real_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(real_json(m(a, b)));
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace mlz::cli
