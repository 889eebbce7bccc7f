// integrability.hpp - zero-area and exact-crossing conditions for MLZ models,
// commutativity checks for multi-time families, and the phases that go with them.

#pragma once

#include "mlz/family.hpp"
#include "mlz/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace mlz {

/// gamma^ab = |A^ab|^2 / (beta_a - beta_b) on coupled pairs, zero elsewhere.
using GammaMatrix = Eigen::MatrixXd;

GammaMatrix gamma_matrix(const MLZModel& model);

struct Point {
  double t;
  double energy;
};

/// Signed area of a closed polygon (counter-clockwise positive).
double shoelace_area(const std::vector<Point>& vertices);

struct LoopArea {
  std::vector<std::size_t> cycle;  // levels a0 -> a1 -> ... -> a0 (closing link implied)
  double area = 0.0;               // signed area of the crossing-point polygon
  double scale = 0.0;              // largest |(de)^2 / (2 db)| along the loop
};

/// One loop per fundamental cycle of the coupling graph (BFS spanning forest).
std::vector<LoopArea> check_ic1(const MLZModel& model);

struct PairResidual {
  std::size_t a = 0;
  std::size_t b = 0;
  double time = 0.0;         // crossing time of the uncoupled pair
  double sum = 0.0;          // second-order sum
  double scale = 0.0;        // largest |term| in the sum
  double residual = 0.0;     // |sum| / scale, 0 when there are no terms
  bool coincident = false;   // a level coupled to only one of a, b crosses at the same point
};

/// Second-order exact-crossing condition on every uncoupled, non-parallel pair:
/// sum_c A^ac A^cb / (E_a - E_c) at t_ab. Throws DegeneracyError if an
/// intermediate level coupled to both is degenerate with the pair at t_ab.
std::vector<PairResidual> check_ic2_perturbative(const MLZModel& model);

struct ICTolerances {
  double area = 1e-10;          // relative to LoopArea::scale
  double perturbative = 1e-9;   // on the normalized residual
};

struct ICReport {
  std::vector<LoopArea> loop_areas;
  std::vector<PairResidual> perturbative_residuals;
  GammaMatrix gamma;
  bool ic1_pass = true;
  bool ic2_pass = true;
  bool zero_offsets = false;          // every offset vanishes (all crossings at t = 0)
  bool coincident_crossings = false;  // a pair was flagged coincident; IC2 fails if it was singular
  bool passed() const noexcept { return ic1_pass && ic2_pass; }
};

ICReport check_integrability(const MLZModel& model, const ICTolerances& tol = {});

struct MTLZReport {
  double b_symmetry = 0.0;        // max ||B_kj - B_jk||
  double b_commutator = 0.0;      // max ||[B_jk, B_lm]||
  double mixed_commutator = 0.0;  // max ||[B_sj, A_k] - [B_sk, A_j]||
  double a_commutator = 0.0;      // max ||[A_j, A_k]||
  double gamma_relation = 0.0;    // max |gamma^ab dLambda_kj - A_k^ab A_j^ab|, relative
  double scale = 1.0;             // max(1, largest matrix entry)^2 used to normalize commutators
  bool passed = true;
};

/// Frobenius-norm residuals of the family conditions; M = 0 passes trivially.
MTLZReport check_mtlz(const MTLZFamily& family, double tolerance = 1e-10);

/// Sum of (e_next - e_prev)^2 / (2 (b_next - b_prev)) along c -> chain... -> a.
/// `chain` lists the intermediate levels only.
double dynamical_phase(const MLZModel& model, std::size_t a, std::size_t c,
                       const std::vector<std::size_t>& chain = {});

/// phi_{+/-} = +/- sgn(gamma) (pi/4 - arg Gamma(-i |gamma|)).
std::pair<double, double> stokes_phase(double gamma_ab);

}  // namespace mlz
