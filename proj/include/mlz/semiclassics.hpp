// semiclassics.hpp - diabatic level diagrams, forward-in-time trajectory sums
// and the equivalent ordered product of pairwise Landau-Zener factors.

#pragma once

#include "mlz/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace mlz {

struct Crossing {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double time = 0.0;
  double coupling = 0.0;
  double p = 1.0;     // stay probability
  double q = 0.0;     // switch probability
  int sign = 1;       // sgn(coupling)

  bool involves(std::size_t level) const noexcept { return level == a || level == b; }
  std::size_t other(std::size_t level) const noexcept { return level == a ? b : a; }
};

struct DiabaticDiagram {
  std::size_t levels = 0;
  std::vector<Crossing> crossings;   // chronological, ties in pair-lexicographic order
  // [first, last) index ranges of crossings sharing one time.
  std::vector<std::pair<std::size_t, std::size_t>> tie_groups;
};

/// Relative tolerance under which two crossing times count as simultaneous.
inline constexpr double kTieTolerance = 1e-12;

DiabaticDiagram build_diagram(const MLZModel& model);

/// Throws DegeneracyError if two simultaneous crossings share a level.
void require_unambiguous_order(const DiabaticDiagram& diagram);

using TransitionMatrix = Eigen::MatrixXd;  // P(a, b): end in a given start in b

struct Trajectory {
  std::size_t from = 0;
  std::size_t to = 0;
  std::vector<std::size_t> crossings;  // indices into DiabaticDiagram::crossings
  std::vector<bool> switched;          // decision at each visited crossing
  std::vector<std::size_t> levels;     // occupied level sequence, from ... to
};

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// All forward-in-time trajectories from `from` to `to`, ordered
/// lexicographically by their decisions (stay before switch).
std::vector<Trajectory> enumerate_paths(const DiabaticDiagram& diagram, std::size_t from, std::size_t to,
                                        std::size_t cap = kDefaultPathCap);

/// Product of sqrt(p) per stay and i sgn(g) sqrt(q) per switch.
std::complex<double> path_amplitude(const DiabaticDiagram& diagram, const Trajectory& path);

/// |sum over trajectories|^2 computed by a memoized backward traversal.
TransitionMatrix semiclassical_matrix(const DiabaticDiagram& diagram);

/// Ordered product of per-crossing factors, earliest applied first.
Eigen::MatrixXcd scattering_amplitudes(const DiabaticDiagram& diagram);
TransitionMatrix scattering_product(const DiabaticDiagram& diagram);

}  // namespace mlz
