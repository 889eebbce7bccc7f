// spectra.hpp - adiabatic energies, perturbative approximations and exact
// level-crossing detection.

#pragma once

#include "mlz/family.hpp"
#include "mlz/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace mlz {

struct SpectralTracks {
  std::vector<double> times;
  Eigen::MatrixXd energies;  // energies(i, k): k-th smallest eigenvalue at times[i]
  // labels[i][k]: track label of the k-th eigenvalue at times[i], continued by
  // maximal eigenvector overlap with the previous grid point.
  std::vector<std::vector<std::size_t>> labels;
};

std::vector<double> linear_grid(double t_min, double t_max, std::size_t points);

SpectralTracks adiabatic_energies(const MLZModel& model, const std::vector<double>& grid, unsigned threads = 1);

/// Second-order energy of diabatic level a: E_a + sum_b |A_ab|^2 / (E_a - E_b).
double perturbative_energy(const MLZModel& model, std::size_t a, double t);

/// Same for H_j(tau) of a multi-time family.
double perturbative_energy(const MTLZFamily& family, std::size_t j, std::size_t a, const Eigen::VectorXd& tau);

struct Window {
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Range of all diabatic crossing times widened by max(1, half the span) on each side.
Window crossing_window(const MLZModel& model);

struct CrossingOptions {
  std::optional<Window> window;      // default: crossing_window(model)
  std::size_t grid_points = 2001;
  double exact_tolerance = 1e-8;     // relative to the spectral range
  unsigned threads = 1;
};

struct CrossingRecord {
  std::size_t lower = 0;    // sorted eigenvalue index; the pair is (lower, lower + 1)
  double time = 0.0;
  double gap = 0.0;
  bool exact = false;
  bool ambiguous = false;   // two refined minima collapsed onto one point
};

struct CrossingScan {
  std::vector<CrossingRecord> minima;  // every refined gap minimum, ordered by time
  double spectral_range = 0.0;
  Window window;

  std::size_t exact_count() const;
  std::vector<CrossingRecord> exact() const;
  /// Smallest avoided gap relative to the spectral range (infinity if none).
  double smallest_avoided_gap() const;
};

/// Scans adjacent-eigenvalue gaps on the grid, refines every local minimum by
/// golden-section search and classifies it.
CrossingScan scan_gap_minima(const MLZModel& model, const CrossingOptions& options = {});

/// Exact crossings only.
std::vector<CrossingRecord> locate_exact_crossings(const MLZModel& model, const CrossingOptions& options = {});

/// 1 + (n-2)(n-3)/2 for two-band models with n levels.
std::size_t expected_crossing_count(std::size_t n);

}  // namespace mlz
