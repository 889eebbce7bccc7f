// family.hpp - multi-time families H_j(tau) = B_kj tau^k + A_j and their
// restriction to straight time contours.

#pragma once

#include "mlz/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mlz {

/// M+1 Hamiltonians linear in the times tau^0..tau^M, all written in one
/// diabatic basis in which every B_kj is diagonal.
struct MTLZFamily {
  std::vector<std::vector<Eigen::MatrixXd>> B;  // B[k][j]
  std::vector<Eigen::MatrixXd> A;               // A[j]

  std::size_t times() const noexcept { return A.size(); }
  std::size_t size() const { return A.empty() ? 0 : static_cast<std::size_t>(A.front().rows()); }

  /// Lambda^a_kj, the diagonal of B_kj.
  double lambda(std::size_t a, std::size_t k, std::size_t j) const;

  /// H_j(tau) = sum_k B_kj tau^k + A_j.
  Eigen::MatrixXd hamiltonian(std::size_t j, const Eigen::VectorXd& tau) const;
};

/// Throws ModelError on inconsistent shapes or non-diagonal B.
void validate(const MTLZFamily& family);

/// Generalized bowtie: two central levels coupled to levels 3..N.
struct BowtieSpec {
  std::vector<double> beta;   // beta_3..beta_N, nonzero
  std::vector<double> gamma;  // gamma_3..gamma_N
  double a = 1.0;             // contour speed, > 0
  double e = 1.0;             // contour offset

  std::size_t levels() const noexcept { return beta.size() + 2; }
};

/// Relative tolerance on kappa = sum gamma_i^2 / beta_i.
inline constexpr double kKappaTolerance = 1e-10;

double bowtie_kappa(const BowtieSpec& spec);

/// The commuting pair H_0, H_1; requires kappa == 0 within tolerance.
MTLZFamily build_bowtie_family(const BowtieSpec& spec);

/// Straight contour tau(t) = v t + eps.
struct Contour {
  Eigen::VectorXd v;
  Eigen::VectorXd eps;
};

/// tau^0 = a t - e, tau^1 = a t + e.
Contour bowtie_contour(const BowtieSpec& spec);

/// MLZ model obtained by restricting the family to a straight contour:
/// b_a = Lambda^a_jk v^j v^k, e_a = Lambda^a_jk eps^j v^k + A_j^aa v^j,
/// g_ab = A_j^ab v^j.
MLZModel pullback_contour(const MTLZFamily& family, const Contour& contour);

}  // namespace mlz
