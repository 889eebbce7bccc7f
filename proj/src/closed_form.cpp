#include "mlz/closed_form.hpp"

#include "mlz/error.hpp"

#include <string>

namespace mlz {

FiveStatePhase five_state_phase(int table_case) {
  switch (table_case) {
    case 1:
    case 8: return FiveStatePhase::one;
    case 2:
    case 7: return FiveStatePhase::two_a;
    case 3:
    case 6: return FiveStatePhase::two_b;
    case 4:
    case 5: return FiveStatePhase::three;
    default: throw ModelError("five-state case must be in 1..8, got " + std::to_string(table_case));
  }
}

std::array<int, 3> five_state_lambda(int table_case) {
  five_state_phase(table_case);
  const int base = table_case <= 4 ? table_case : 9 - table_case;
  std::array<int, 3> lambda{1, 1, 1};
  if (base > 1) lambda[static_cast<std::size_t>(base - 2)] = -1;
  if (table_case > 4)
    for (int& s : lambda) s = -s;
  return lambda;
}

TransitionMatrix closed_form_five_state(FiveStatePhase phase, double p3, double p4) {
  const double q3 = 1.0 - p3, q4 = 1.0 - p4;
  const double p5 = p3 * p4, q5 = 1.0 - p5;
  const double d = p3 * p3 * p4 * p4;
  TransitionMatrix m(5, 5);
  switch (phase) {
    case FiveStatePhase::one:
      m << d, 0, p3 * p4 * q3, p3 * p3 * p4 * q4, q5,
           0, d, q3, p3 * q4, p3 * p4 * q5,
           p3 * p4 * q3, q3, p3 * p3, p3 * q3 * q4, 0,
           p3 * p3 * p4 * q4, p3 * q4, p3 * q3 * q4, (p4 + q3 * q4) * (p4 + q3 * q4), 0,
           q5, p3 * p4 * q5, 0, 0, d;
      break;
    case FiveStatePhase::two_a: {
      const double x = p3 * p4 - q3 * q4;
      m << x * x, p4 * q3 * q3, p3 * q3, p4 * q4, p3 * q5,
           p4 * q3 * q3, d, p3 * p4 * q3, q4, p3 * p4 * q5,
           p3 * q3, p3 * p4 * q3, p3 * p3, 0, q3 * q5,
           p4 * q4, q4, 0, p4 * p4, 0,
           p3 * q5, p3 * p4 * q5, q3 * q5, 0, d;
      break;
    }
    case FiveStatePhase::two_b: {
      const double x = p3 * p4 - q3 * q4;
      m << x * x, p3 * q4 * q4, p3 * q3, p4 * q4, p4 * q5,
           p3 * q4 * q4, d, q3, p3 * p4 * q4, p3 * p4 * q5,
           p3 * q3, q3, p3 * p3, 0, 0,
           p4 * q4, p3 * p4 * q4, 0, p4 * p4, q4 * q5,
           p4 * q5, p3 * p4 * q5, 0, q4 * q5, d;
      break;
    }
    case FiveStatePhase::three:
      // (3,3) is p3^2; a bare p3 there would make row 3 sum above one.
      m << d, q5 * q5, p3 * p4 * q3, p3 * p3 * p4 * q4, p3 * p4 * q5,
           q5 * q5, d, p3 * p4 * q3, p3 * p3 * p4 * q4, p3 * p4 * q5,
           p3 * p4 * q3, p3 * p4 * q3, p3 * p3, p3 * q3 * q4, q3 * q5,
           p3 * p3 * p4 * q4, p3 * p3 * p4 * q4, p3 * q3 * q4, (p4 + q3 * q4) * (p4 + q3 * q4), p3 * q4 * q5,
           p3 * p4 * q5, p3 * p4 * q5, q3 * q5, p3 * q4 * q5, d;
      break;
  }
  return m;
}

Eigen::VectorXd closed_form_six_state_row(std::size_t from, const std::array<double, 4>& p) {
  const double p3 = p[0], p4 = p[1], p6 = p[3];
  const double q3 = 1.0 - p3, q4 = 1.0 - p4, q5 = 1.0 - p[2], q6 = 1.0 - p6;
  Eigen::VectorXd row(6);
  if (from == 0) {
    const double x = p3 * p4 - q3 * q4;
    row << x * x, p4 * q3 * q3, p3 * q3, p4 * q4, p3 * p6 * q5, p3 * q6;
  } else if (from == 2) {
    row << p3 * q3, p3 * p4 * q3, p3 * p3, 0.0, p6 * q3 * q5, q3 * q6;
  } else {
    throw ModelError("six-state closed form is known only from levels 1 and 3");
  }
  return row;
}

Eigen::VectorXd closed_form_ten_state_row(const std::vector<double>& p) {
  if (p.size() != 8) throw ModelError("ten-state closed form needs p_3..p_10");
  auto pp = [&p](int i) { return p[static_cast<std::size_t>(i - 3)]; };
  auto qq = [&p](int i) { return 1.0 - p[static_cast<std::size_t>(i - 3)]; };
  const double tail = pp(8) * pp(9) * pp(10);
  Eigen::VectorXd row(10);
  row(0) = pp(3) * pp(4) * pp(5) * pp(6) * pp(7) * tail;
  row(1) = 0.0;
  double upper = 1.0;  // product of p_3..p_{i-1} over the upper band
  for (int i = 3; i <= 7; ++i) {
    row(i - 1) = upper * tail * qq(i);
    upper *= pp(i);
  }
  row(7) = pp(9) * pp(10) * qq(8);
  row(8) = pp(10) * qq(9);
  row(9) = qq(10);
  return row;
}

}  // namespace mlz
