// model.hpp - linear-in-time multistate Landau-Zener Hamiltonians and the
// builders for the solvable families (two-band, distorted Tavis-Cummings, 2x3).
//
// Level indices are 0-based in this API; user-facing I/O adds one.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace mlz {

/// H(t) = A + B t in the diabatic basis, with B = diag(slopes),
/// diag(A) = offsets and real symmetric off-diagonal couplings.
///
/// Parallel levels are allowed only when they are not directly coupled.
class MLZModel {
 public:
  MLZModel(Eigen::VectorXd slopes, Eigen::VectorXd offsets, Eigen::MatrixXd couplings);

  std::size_t size() const noexcept { return static_cast<std::size_t>(slopes_.size()); }

  const Eigen::VectorXd& slopes() const noexcept { return slopes_; }
  const Eigen::VectorXd& offsets() const noexcept { return offsets_; }
  const Eigen::MatrixXd& couplings() const noexcept { return couplings_; }

  double slope(std::size_t a) const { return slopes_(idx(a)); }
  double offset(std::size_t a) const { return offsets_(idx(a)); }
  double coupling(std::size_t a, std::size_t b) const { return couplings_(idx(a), idx(b)); }
  bool coupled(std::size_t a, std::size_t b) const { return a != b && coupling(a, b) != 0.0; }

  double diabatic_energy(std::size_t a, double t) const { return slope(a) * t + offset(a); }

  /// Time at which diabatic levels a and b cross; throws DegeneracyError for parallel levels.
  double crossing_time(std::size_t a, std::size_t b) const;

  /// Number of directly coupled (a<b) pairs.
  std::size_t coupled_pair_count() const;

 private:
  static Eigen::Index idx(std::size_t a) { return static_cast<Eigen::Index>(a); }

  Eigen::VectorXd slopes_;
  Eigen::VectorXd offsets_;
  Eigen::MatrixXd couplings_;
};

/// Real symmetric matrix A + B t.
Eigen::MatrixXd hamiltonian_at(const MLZModel& model, double t);

/// Pairwise Landau-Zener probability to stay on the diabatic level.
double lz_probability(double coupling, double slope_a, double slope_b);

/// Stay/switch probabilities from one exponential so that p + q == 1.
struct LzPair {
  double p;
  double q;
};
LzPair lz_pair(double coupling, double slope_a, double slope_b);

// ---------------------------------------------------------------------------
// Two-band family: levels 1,2 with slopes +/-b coupled to levels 3..N.
// ---------------------------------------------------------------------------

struct TwoBandSpec {
  double b = 1.0;
  std::vector<double> slopes;    // b_3..b_N
  std::vector<double> g1;        // g_{1i}
  double e = 1.0;                // scale of the offsets, >= 0
  std::vector<int> lambda;       // sign of e_i
  std::vector<int> tau;          // sign of g_{2i}/g_{1i}; empty -> derived from rho
  int rho = 1;                   // common value of lambda_i tau_i sgn(b_i)

  std::size_t levels() const noexcept { return slopes.size() + 2; }
};

/// Relative tolerance for the closure sum sum_i g_{1i}^2/(b_i - b).
inline constexpr double kClosureTolerance = 1e-10;

/// tau_i implied by lambda, rho and the slope signs.
std::vector<int> derived_tau(const TwoBandSpec& spec);

/// Normalized closure residual |sum g^2/(b_i-b)| / max|g^2/(b_i-b)| (0 when all couplings vanish).
double closure_residual(const TwoBandSpec& spec);

/// Throws ModelError when the spec violates any two-band constraint.
void validate(const TwoBandSpec& spec);

MLZModel build_two_band(const TwoBandSpec& spec);

/// |g_{1i}| for the level at position `unset` of spec.g1 (value ignored) making
/// the closure sum vanish.
double solve_coupling_closure(const TwoBandSpec& spec, std::size_t unset);

/// Constraint residuals of a model that has the two-band matrix shape.
struct TwoBandResiduals {
  double slope_margin = 0.0;     // min |b_i| - b; must be > 0
  double offset = 0.0;           // spread of |e_i| / sqrt(b_i^2/b^2 - 1), relative to e
  double closure = 0.0;          // normalized closure sum
  double coupling_ratio = 0.0;   // max relative |g2^2 - g1^2 (b_i+b)/(b_i-b)|
  bool sign_consistent = true;   // lambda_i tau_i sigma_i identical
  bool zero_scale = false;       // all offsets vanish; signs lambda undefined
  double max_residual() const;
};

/// Recovers (b, b_i, e, lambda, tau, g1) from a model with the two-band shape and
/// evaluates the constraint residuals. Throws ModelError if the shape is wrong.
TwoBandResiduals two_band_residuals(const MLZModel& model);

/// Recovers a spec from a model with the two-band shape (no constraint checks).
TwoBandSpec extract_two_band(const MLZModel& model);

// ---------------------------------------------------------------------------
// Distorted driven Tavis-Cummings model in a fixed excitation sector.
// ---------------------------------------------------------------------------

struct DTCMSpec {
  int n_spins = 1;
  int n_bosons = 0;
  double beta = 1.0;
  double gamma_distort = 1.0;
  std::vector<double> epsilon;   // one splitting per spin
  double g = 0.1;
};

/// Slope of a diabatic state with n up-spins.
double dtcm_slope(const DTCMSpec& spec, int n_up);

/// Basis: spin bitstrings ordered by integer value, spin 1 = most significant bit.
MLZModel build_dtcm(const DTCMSpec& spec);

// ---------------------------------------------------------------------------
// Distorted 2x3 model (Landau-Zener x Demkov-Osherov).
// ---------------------------------------------------------------------------

struct TwoByThreeSpec {
  double b1 = 4.0;
  double b2 = 2.0;
  double b3 = 1.0;
  double e2 = 1.0;
  double e3 = 3.0;
  double g1 = 0.1;
  double g2 = 0.12;
  double g3 = 0.15;
  int branch = -1;
};

/// Offset multiplier (e5/e2 == e6/e3) on the selected branch.
double two_by_three_offset_factor(const TwoByThreeSpec& spec);

MLZModel build_2x3(const TwoByThreeSpec& spec);

}  // namespace mlz
