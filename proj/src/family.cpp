#include "mlz/family.hpp"

#include "mlz/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mlz {

double MTLZFamily::lambda(std::size_t a, std::size_t k, std::size_t j) const {
  const auto i = static_cast<Eigen::Index>(a);
  return B.at(k).at(j)(i, i);
}

Eigen::MatrixXd MTLZFamily::hamiltonian(std::size_t j, const Eigen::VectorXd& tau) const {
  if (static_cast<std::size_t>(tau.size()) != times())
    throw ModelError("MTLZFamily: tau has the wrong number of components");
  Eigen::MatrixXd h = A.at(j);
  for (std::size_t k = 0; k < times(); ++k) h += B[k][j] * tau(static_cast<Eigen::Index>(k));
  return h;
}

void validate(const MTLZFamily& family) {
  const std::size_t m = family.times();
  if (m == 0) throw ModelError("MTLZFamily: at least one time is required");
  const auto n = static_cast<Eigen::Index>(family.size());
  if (n < 2) throw ModelError("MTLZFamily: at least two levels are required");
  if (family.B.size() != m) throw ModelError("MTLZFamily: B must be (M+1)x(M+1)");
  for (std::size_t k = 0; k < m; ++k) {
    if (family.B[k].size() != m) throw ModelError("MTLZFamily: B must be (M+1)x(M+1)");
    if (family.A[k].rows() != n || family.A[k].cols() != n)
      throw ModelError("MTLZFamily: A matrices must all be N x N");
    if (family.A[k] != family.A[k].transpose())
      throw ModelError("MTLZFamily: A matrices must be symmetric");
    for (std::size_t j = 0; j < m; ++j) {
      const Eigen::MatrixXd& b = family.B[k][j];
      if (b.rows() != n || b.cols() != n) throw ModelError("MTLZFamily: B matrices must all be N x N");
      Eigen::MatrixXd off = b;
      off.diagonal().setZero();
      if (off.cwiseAbs().maxCoeff() != 0.0)
        throw ModelError("MTLZFamily: B matrices must be diagonal in the diabatic basis");
    }
  }
}

double bowtie_kappa(const BowtieSpec& spec) {
  double kappa = 0.0;
  for (std::size_t i = 0; i < spec.beta.size(); ++i) kappa += spec.gamma[i] * spec.gamma[i] / spec.beta[i];
  return kappa;
}

MTLZFamily build_bowtie_family(const BowtieSpec& spec) {
  const std::size_t m = spec.beta.size();
  if (m < 1) throw ModelError("bowtie: at least one outer level is required");
  if (spec.gamma.size() != m) throw ModelError("bowtie: beta and gamma must have equal lengths");
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(spec.beta[i] != 0.0) || !std::isfinite(spec.beta[i]) || !std::isfinite(spec.gamma[i]))
      throw ModelError("bowtie: beta_" + std::to_string(i + 3) + " must be finite and nonzero");
    scale = std::max(scale, std::abs(spec.gamma[i] * spec.gamma[i] / spec.beta[i]));
  }
  if (std::abs(bowtie_kappa(spec)) > kKappaTolerance * scale)
    throw ModelError("bowtie: kappa = sum gamma_i^2/beta_i must vanish");

  const auto n = static_cast<Eigen::Index>(m + 2);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  MTLZFamily family;
  family.B.assign(2, std::vector<Eigen::MatrixXd>(2, zero));
  family.A.assign(2, zero);
  family.B[0][1](0, 0) = 0.5;
  family.B[0][1](1, 1) = -0.5;
  family.B[1][0] = family.B[0][1];
  for (std::size_t k = 0; k < m; ++k) {
    const auto i = static_cast<Eigen::Index>(k + 2);
    const double beta = spec.beta[k];
    const double gamma = spec.gamma[k];
    family.B[0][0](i, i) = beta;
    family.B[1][1](i, i) = 1.0 / (4.0 * beta);
    family.A[0](0, i) = family.A[0](i, 0) = gamma;
    family.A[0](1, i) = family.A[0](i, 1) = gamma;
    family.A[1](0, i) = family.A[1](i, 0) = -gamma / (2.0 * beta);
    family.A[1](1, i) = family.A[1](i, 1) = gamma / (2.0 * beta);
  }
  return family;
}

Contour bowtie_contour(const BowtieSpec& spec) {
  if (!(spec.a > 0.0)) throw ModelError("bowtie: contour speed a must be positive");
  Contour c;
  c.v = Eigen::Vector2d(spec.a, spec.a);
  c.eps = Eigen::Vector2d(-spec.e, spec.e);
  return c;
}

MLZModel pullback_contour(const MTLZFamily& family, const Contour& contour) {
  validate(family);
  const std::size_t m = family.times();
  if (static_cast<std::size_t>(contour.v.size()) != m || static_cast<std::size_t>(contour.eps.size()) != m)
    throw ModelError("pullback: contour vectors must have one entry per time");
  const auto n = static_cast<Eigen::Index>(family.size());
  Eigen::VectorXd slopes = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd offsets = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < m; ++j) {
    const double vj = contour.v(static_cast<Eigen::Index>(j));
    const double ej = contour.eps(static_cast<Eigen::Index>(j));
    for (std::size_t k = 0; k < m; ++k) {
      const Eigen::VectorXd lam = family.B[j][k].diagonal();
      const double vk = contour.v(static_cast<Eigen::Index>(k));
      slopes += lam * (vj * vk);
      offsets += lam * (ej * vk);
    }
    offsets += family.A[j].diagonal() * vj;
    couplings += family.A[j] * vj;
  }
  couplings.diagonal().setZero();
  // Exact symmetry regardless of rounding in the weighted sums.
  const Eigen::MatrixXd sym = 0.5 * (couplings + couplings.transpose());
  return MLZModel(std::move(slopes), std::move(offsets), sym);
}

}  // namespace mlz
