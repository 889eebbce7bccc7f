// Helpers shared by the test executables.

#pragma once

#include "mlz/closed_form.hpp"
#include "mlz/model.hpp"
#include "mlz/recipes.hpp"

#include <Eigen/Dense>

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mlz::test {

inline double max_abs_diff(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

inline double stochastic_defect(const Eigen::MatrixXd& p) {
  const double rows = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (p.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

inline MLZModel two_state(double g, double b = 1.0, double offset = 0.0) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(0, 1) = c(1, 0) = g;
  return MLZModel(Eigen::Vector2d(b, -b), Eigen::Vector2d(offset, 0.0), c);
}

/// Named models that satisfy the integrability conditions.
inline std::vector<std::pair<std::string, MLZModel>> integrable_corpus() {
  std::vector<std::pair<std::string, MLZModel>> out;
  for (int c = 1; c <= 8; ++c)
    out.emplace_back("five-state case " + std::to_string(c), build_two_band(five_state_diagram_spec(c)));
  out.emplace_back("five-state g=0.2", build_two_band(five_state_spec(0.2)));
  out.emplace_back("six-state g=0.2", build_two_band(six_state_spec(0.2)));
  out.emplace_back("ten-state g=0.15", build_two_band(ten_state_spec(0.15)));
  for (std::size_t n = 5; n <= 8; ++n) {
    std::mt19937_64 rng(100 + n);
    out.emplace_back("random two-band n=" + std::to_string(n),
                     build_two_band(random_two_band(rng, crossing_lambda_pattern(n))));
  }
  out.emplace_back("dtcm three spins", build_dtcm(three_spin_dtcm()));
  DTCMSpec four = three_spin_dtcm();
  four.n_spins = 4;
  four.gamma_distort = 1.5;
  four.epsilon = {2.4, 0.0, -1.0, 1.3};
  out.emplace_back("dtcm four spins", build_dtcm(four));
  out.emplace_back("2x3", build_2x3(TwoByThreeSpec{}));
  return out;
}

}  // namespace mlz::test
