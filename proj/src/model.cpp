#include "mlz/model.hpp"

#include "mlz/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace mlz {

namespace {

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

bool is_sign(int s) { return s == 1 || s == -1; }

std::string level_name(std::size_t a) { return std::to_string(a + 1); }

}  // namespace

MLZModel::MLZModel(Eigen::VectorXd slopes, Eigen::VectorXd offsets, Eigen::MatrixXd couplings)
    : slopes_(std::move(slopes)), offsets_(std::move(offsets)), couplings_(std::move(couplings)) {
  const Eigen::Index n = slopes_.size();
  if (n < 2) throw ModelError("MLZModel: at least two levels are required");
  if (offsets_.size() != n || couplings_.rows() != n || couplings_.cols() != n)
    throw ModelError("MLZModel: slopes, offsets and couplings have inconsistent sizes");
  if (!slopes_.allFinite() || !offsets_.allFinite() || !couplings_.allFinite())
    throw ModelError("MLZModel: non-finite parameter");
  for (Eigen::Index a = 0; a < n; ++a) {
    if (couplings_(a, a) != 0.0) throw ModelError("MLZModel: coupling matrix must have zero diagonal");
    for (Eigen::Index b = a + 1; b < n; ++b) {
      if (couplings_(a, b) != couplings_(b, a))
        throw ModelError("MLZModel: coupling matrix must be symmetric");
      if (couplings_(a, b) != 0.0 && slopes_(a) == slopes_(b))
        throw DegeneracyError("MLZModel: coupled levels " + level_name(static_cast<std::size_t>(a)) +
                              " and " + level_name(static_cast<std::size_t>(b)) + " are parallel");
    }
  }
}

double MLZModel::crossing_time(std::size_t a, std::size_t b) const {
  const double db = slope(a) - slope(b);
  if (db == 0.0)
    throw DegeneracyError("levels " + level_name(a) + " and " + level_name(b) + " are parallel");
  return -(offset(a) - offset(b)) / db;
}

std::size_t MLZModel::coupled_pair_count() const {
  std::size_t count = 0;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b)
      if (coupled(a, b)) ++count;
  return count;
}

Eigen::MatrixXd hamiltonian_at(const MLZModel& model, double t) {
  Eigen::MatrixXd h = model.couplings();
  h.diagonal() = model.slopes() * t + model.offsets();
  return h;
}

LzPair lz_pair(double coupling, double slope_a, double slope_b) {
  const double ds = std::abs(slope_a - slope_b);
  if (ds == 0.0) throw DegeneracyError("lz_probability: equal slopes");
  const double p = std::exp(-2.0 * std::numbers::pi * coupling * coupling / ds);
  return {p, 1.0 - p};
}

double lz_probability(double coupling, double slope_a, double slope_b) {
  return lz_pair(coupling, slope_a, slope_b).p;
}

// ---------------------------------------------------------------------------
// Two-band family
// ---------------------------------------------------------------------------

std::vector<int> derived_tau(const TwoBandSpec& spec) {
  std::vector<int> tau(spec.slopes.size());
  for (std::size_t k = 0; k < tau.size(); ++k)
    tau[k] = spec.rho * spec.lambda.at(k) * sign_of(spec.slopes[k]);
  return tau;
}

double closure_residual(const TwoBandSpec& spec) {
  double sum = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < spec.slopes.size(); ++k) {
    const double term = spec.g1[k] * spec.g1[k] / (spec.slopes[k] - spec.b);
    sum += term;
    scale = std::max(scale, std::abs(term));
  }
  return scale == 0.0 ? 0.0 : std::abs(sum) / scale;
}

void validate(const TwoBandSpec& spec) {
  const std::size_t m = spec.slopes.size();
  if (m < 2) throw ModelError("two-band: at least four levels are required");
  if (spec.g1.size() != m || spec.lambda.size() != m)
    throw ModelError("two-band: slopes, g1 and lambda must have one entry per level 3..N");
  if (!spec.tau.empty() && spec.tau.size() != m)
    throw ModelError("two-band: tau must have one entry per level 3..N");
  if (!(spec.b > 0.0) || !std::isfinite(spec.b)) throw ModelError("two-band: b must be positive");
  if (!(spec.e >= 0.0) || !std::isfinite(spec.e)) throw ModelError("two-band: e must be non-negative");
  if (!is_sign(spec.rho)) throw ModelError("two-band: rho must be +1 or -1");

  for (std::size_t k = 0; k < m; ++k) {
    const std::string level = std::to_string(k + 3);
    if (!std::isfinite(spec.slopes[k]) || !std::isfinite(spec.g1[k]))
      throw ModelError("two-band: non-finite parameter for level " + level);
    if (!(std::abs(spec.slopes[k]) > spec.b))
      throw ModelError("two-band: |b_" + level + "| must exceed b");
    if (!is_sign(spec.lambda[k])) throw ModelError("two-band: lambda_" + level + " must be +/-1");
    if (!spec.tau.empty() && !is_sign(spec.tau[k]))
      throw ModelError("two-band: tau_" + level + " must be +/-1");
    for (std::size_t j = 0; j < k; ++j)
      if (spec.slopes[j] == spec.slopes[k])
        throw ModelError("two-band: levels " + std::to_string(j + 3) + " and " + level + " are parallel");
  }

  if (!spec.tau.empty()) {
    for (std::size_t k = 0; k < m; ++k)
      if (spec.lambda[k] * spec.tau[k] * sign_of(spec.slopes[k]) != spec.rho)
        throw ModelError("two-band: sign condition lambda_i tau_i sgn(b_i) = rho violated at level " +
                         std::to_string(k + 3));
  }

  const double residual = closure_residual(spec);
  if (residual > kClosureTolerance) {
    const bool all_positive = std::all_of(spec.slopes.begin(), spec.slopes.end(), [](double s) { return s > 0; });
    const bool all_negative = std::all_of(spec.slopes.begin(), spec.slopes.end(), [](double s) { return s < 0; });
    if (all_positive || all_negative)
      throw ModelError("two-band: closure impossible, all slopes b_i share one sign");
    std::ostringstream msg;
    msg << "two-band: coupling closure sum g1_i^2/(b_i-b) is not zero (relative residual " << residual << ")";
    throw ModelError(msg.str());
  }
}

MLZModel build_two_band(const TwoBandSpec& spec) {
  validate(spec);
  const std::size_t n = spec.levels();
  const std::vector<int> tau = spec.tau.empty() ? derived_tau(spec) : spec.tau;

  Eigen::VectorXd slopes(n);
  Eigen::VectorXd offsets = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  slopes(0) = spec.b;
  slopes(1) = -spec.b;
  for (std::size_t k = 0; k < spec.slopes.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k + 2);
    const double bi = spec.slopes[k];
    slopes(i) = bi;
    offsets(i) = spec.lambda[k] * spec.e * std::sqrt(bi * bi / (spec.b * spec.b) - 1.0);
    const double g2 = tau[k] * spec.g1[k] * std::sqrt((bi + spec.b) / (bi - spec.b));
    couplings(0, i) = couplings(i, 0) = spec.g1[k];
    couplings(1, i) = couplings(i, 1) = g2;
  }
  return MLZModel(std::move(slopes), std::move(offsets), std::move(couplings));
}

double solve_coupling_closure(const TwoBandSpec& spec, std::size_t unset) {
  if (unset >= spec.slopes.size() || spec.g1.size() != spec.slopes.size())
    throw ModelError("solve_coupling_closure: unset index out of range");
  double partial = 0.0;
  for (std::size_t k = 0; k < spec.slopes.size(); ++k)
    if (k != unset) partial += spec.g1[k] * spec.g1[k] / (spec.slopes[k] - spec.b);
  if (partial == 0.0) return 0.0;
  const double g_squared = -partial * (spec.slopes[unset] - spec.b);
  if (g_squared < 0.0)
    throw ModelError("solve_coupling_closure: no real coupling for level " + std::to_string(unset + 3) +
                     ", its term has the same sign as the partial sum");
  return std::sqrt(g_squared);
}

double TwoBandResiduals::max_residual() const {
  return std::max({offset, closure, coupling_ratio});
}

namespace {

void require_two_band_shape(const MLZModel& model) {
  const std::size_t n = model.size();
  if (n < 4) throw ModelError("two-band shape: at least four levels are required");
  const double b = model.slope(0);
  if (!(b > 0.0) || model.slope(1) != -b)
    throw ModelError("two-band shape: levels 1 and 2 must have slopes +b and -b with b > 0");
  if (model.offset(0) != 0.0 || model.offset(1) != 0.0)
    throw ModelError("two-band shape: levels 1 and 2 must have zero offsets");
  if (model.coupled(0, 1)) throw ModelError("two-band shape: levels 1 and 2 must be uncoupled");
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (model.coupled(i, j))
        throw ModelError("two-band shape: levels " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                         " must be uncoupled");
}

}  // namespace

TwoBandSpec extract_two_band(const MLZModel& model) {
  require_two_band_shape(model);
  TwoBandSpec spec;
  spec.b = model.slope(0);
  const std::size_t m = model.size() - 2;
  double scale_sum = 0.0;
  std::size_t scale_count = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 2;
    const double bi = model.slope(i);
    spec.slopes.push_back(bi);
    spec.g1.push_back(model.coupling(0, i));
    spec.lambda.push_back(sign_of(model.offset(i)));
    const double g1 = model.coupling(0, i);
    const double g2 = model.coupling(1, i);
    spec.tau.push_back(g1 == 0.0 ? 1 : sign_of(g2 / g1));
    const double radicand = bi * bi / (spec.b * spec.b) - 1.0;
    if (radicand > 0.0) {
      scale_sum += std::abs(model.offset(i)) / std::sqrt(radicand);
      ++scale_count;
    }
  }
  spec.e = scale_count == 0 ? 0.0 : scale_sum / static_cast<double>(scale_count);
  spec.rho = spec.lambda[0] * spec.tau[0] * sign_of(spec.slopes[0]);
  return spec;
}

TwoBandResiduals two_band_residuals(const MLZModel& model) {
  const TwoBandSpec spec = extract_two_band(model);
  TwoBandResiduals r;
  const double b = spec.b;
  const std::size_t m = spec.slopes.size();

  r.slope_margin = std::numeric_limits<double>::infinity();
  for (double bi : spec.slopes) r.slope_margin = std::min(r.slope_margin, std::abs(bi) - b);

  double max_offset = 0.0;
  for (std::size_t k = 0; k < m; ++k) max_offset = std::max(max_offset, std::abs(model.offset(k + 2)));
  r.zero_scale = max_offset == 0.0;
  if (!r.zero_scale && r.slope_margin > 0.0) {
    for (std::size_t k = 0; k < m; ++k) {
      const double bi = spec.slopes[k];
      const double implied = std::abs(model.offset(k + 2)) / std::sqrt(bi * bi / (b * b) - 1.0);
      r.offset = std::max(r.offset, std::abs(implied - spec.e) / spec.e);
    }
  } else if (!r.zero_scale) {
    r.offset = std::numeric_limits<double>::infinity();
  }

  r.closure = closure_residual(spec);

  for (std::size_t k = 0; k < m; ++k) {
    const double bi = spec.slopes[k];
    const double g1 = spec.g1[k];
    const double g2 = model.coupling(1, k + 2);
    const double target = g1 * g1 * (bi + b) / (bi - b);
    const double scale = std::max({g2 * g2, std::abs(target), std::numeric_limits<double>::min()});
    r.coupling_ratio = std::max(r.coupling_ratio, std::abs(g2 * g2 - target) / scale);
    if (target < 0.0) r.coupling_ratio = std::numeric_limits<double>::infinity();
  }

  if (!r.zero_scale) {
    std::optional<int> common;
    for (std::size_t k = 0; k < m; ++k) {
      if (spec.g1[k] == 0.0) continue;
      const int product = spec.lambda[k] * spec.tau[k] * sign_of(spec.slopes[k]);
      if (common && *common != product) r.sign_consistent = false;
      common = product;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Distorted Tavis-Cummings
// ---------------------------------------------------------------------------

double dtcm_slope(const DTCMSpec& spec, int n_up) {
  if (n_up <= 0) return 0.0;
  if (n_up == 1) return spec.beta;
  if (n_up == 2) return (1.0 + spec.gamma_distort) * spec.beta;
  const double n = n_up;
  const double denominator = 1.0 - (n - 2.0) / n * spec.gamma_distort;
  if (std::abs(denominator) < 1e-14)
    throw ModelError("dtcm: singular slope denominator for n = " + std::to_string(n_up));
  return (1.0 + spec.gamma_distort) / denominator * spec.beta;
}

MLZModel build_dtcm(const DTCMSpec& spec) {
  if (spec.n_spins < 1 || spec.n_spins > 20) throw ModelError("dtcm: n_spins must be in [1, 20]");
  if (spec.n_bosons < 0) throw ModelError("dtcm: n_bosons must be non-negative");
  if (!(spec.beta != 0.0) || !std::isfinite(spec.beta)) throw ModelError("dtcm: beta must be nonzero");
  if (spec.epsilon.size() != static_cast<std::size_t>(spec.n_spins))
    throw ModelError("dtcm: epsilon must have one entry per spin");

  const int ns = spec.n_spins;
  const std::size_t n = std::size_t{1} << ns;
  std::vector<double> slope_by_count(static_cast<std::size_t>(ns) + 1);
  for (int k = 0; k <= ns; ++k) slope_by_count[static_cast<std::size_t>(k)] = dtcm_slope(spec, k);

  auto spin_up = [ns](std::size_t state, int spin) { return ((state >> (ns - 1 - spin)) & 1u) != 0; };

  Eigen::VectorXd slopes(static_cast<Eigen::Index>(n));
  Eigen::VectorXd offsets(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    const int up = std::popcount(s);
    const double bn = slope_by_count[static_cast<std::size_t>(up)];
    double splitting = 0.0;
    for (int i = 0; i < ns; ++i)
      if (spin_up(s, i)) splitting += spec.epsilon[static_cast<std::size_t>(i)];
    slopes(static_cast<Eigen::Index>(s)) = bn;
    offsets(static_cast<Eigen::Index>(s)) = up == 0 ? 0.0 : bn / (up * spec.beta) * splitting;
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (int i = 0; i < ns; ++i) {
      if (spin_up(s, i)) continue;
      const std::size_t u = s | (std::size_t{1} << (ns - 1 - i));
      const int up = std::popcount(u);
      const double ratio = (slope_by_count[static_cast<std::size_t>(up)] -
                            slope_by_count[static_cast<std::size_t>(up - 1)]) / spec.beta;
      if (ratio < 0.0) throw ModelError("dtcm: slope ordering makes the coupling rescaling imaginary");
      const double g = spec.g * std::sqrt(static_cast<double>(spec.n_bosons + up)) * std::sqrt(ratio);
      couplings(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(u)) = g;
      couplings(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(s)) = g;
    }
  }
  return MLZModel(std::move(slopes), std::move(offsets), std::move(couplings));
}

// ---------------------------------------------------------------------------
// 2x3 model
// ---------------------------------------------------------------------------

double two_by_three_offset_factor(const TwoByThreeSpec& spec) {
  const double b1 = spec.b1, b2 = spec.b2, b3 = spec.b3;
  const double radicand = (b1 - b2) * (b1 - b3) / ((b1 + b2) * (b1 + b3));
  if (radicand < 0.0) throw ModelError("2x3: negative radicand in the offset constraint");
  return (b1 + b3) / (b2 + b3) * (1.0 + spec.branch * std::sqrt(radicand));
}

MLZModel build_2x3(const TwoByThreeSpec& spec) {
  if (!(spec.b1 > 0.0 && spec.b2 > 0.0 && spec.b3 > 0.0)) throw ModelError("2x3: slopes must be positive");
  if (!is_sign(spec.branch)) throw ModelError("2x3: branch must be +1 or -1");
  if (spec.b1 == spec.b2) throw ModelError("2x3: b1 and b2 must differ");
  const double b1 = spec.b1, b2 = spec.b2, b3 = spec.b3;
  const double lz_ratio = (b1 - b3) / (b1 - b2);
  if (lz_ratio < 0.0) throw ModelError("2x3: (b1-b3)/(b1-b2) must be non-negative");
  const double factor = two_by_three_offset_factor(spec);
  const double do_scale = std::sqrt((b1 + b3) / (b1 + b2));

  Eigen::VectorXd slopes(6);
  slopes << b1, -b2, -b2, b3, -b1, -b1;
  Eigen::VectorXd offsets(6);
  offsets << 0.0, spec.e2, spec.e3, 0.0, factor * spec.e2, factor * spec.e3;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(6, 6);
  auto set = [&c](int a, int b, double g) { c(a, b) = c(b, a) = g; };
  set(0, 1, spec.g2);
  set(0, 2, spec.g3);
  set(0, 3, spec.g1 * std::sqrt(lz_ratio));
  set(1, 4, spec.g1);
  set(2, 5, spec.g1);
  set(3, 4, spec.g2 * do_scale);
  set(3, 5, spec.g3 * do_scale);
  return MLZModel(std::move(slopes), std::move(offsets), std::move(c));
}

}  // namespace mlz
