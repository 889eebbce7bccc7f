// closed_form.hpp - analytic transition probabilities of specific two-band
// models, used as oracles for the numerical and semiclassical pipelines.

#pragma once

#include "mlz/semiclassics.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace mlz {

/// Five-state models with b_3 > b_4 > 0 > b_5 fall into eight sign cases
/// (lambda_3, lambda_4, lambda_5) that collapse into these phases.
enum class FiveStatePhase {
  one,      // cases 1 and 8
  two_a,    // cases 2 and 7
  two_b,    // cases 3 and 6
  three,    // cases 4 and 5
};

/// Throws ModelError for a case outside 1..8.
FiveStatePhase five_state_phase(int table_case);

/// lambda signs of a case: 1 -> (1,1,1), 2 -> (-1,1,1), 3 -> (1,-1,1), 4 -> (1,1,-1),
/// and case 9-n flips every sign of case n.
std::array<int, 3> five_state_lambda(int table_case);

/// Full 5x5 matrix at stay probabilities p3, p4 (p5 = p3 p4 by the closure).
TransitionMatrix closed_form_five_state(FiveStatePhase phase, double p3, double p4);

/// Six-state model with lambda = (-1, 1, 1, 1) and b_3 > b_4 > 0 > b_5 > b_6:
/// probabilities P(from -> j), j = 1..6, for from = 0 (level 1) or 2 (level 3).
/// p holds p_3..p_6.
Eigen::VectorXd closed_form_six_state_row(std::size_t from, const std::array<double, 4>& p);

/// Ten-state model with b_3 > ... > b_7 > b > 0 > -b > b_8 > b_9 > b_10 and all
/// lambda = 1: P(1 -> j), j = 1..10. p holds p_3..p_10.
Eigen::VectorXd closed_form_ten_state_row(const std::vector<double>& p);

}  // namespace mlz
