#include "mlz/spectra.hpp"

#include "mlz/error.hpp"
#include "mlz/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace mlz {

std::vector<double> linear_grid(double t_min, double t_max, std::size_t points) {
  if (points < 2 || !(t_min < t_max)) throw ModelError("linear_grid: need t_min < t_max and at least two points");
  std::vector<double> grid(points);
  const double step = (t_max - t_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = t_min + step * static_cast<double>(i);
  grid.back() = t_max;
  return grid;
}

SpectralTracks adiabatic_energies(const MLZModel& model, const std::vector<double>& grid, unsigned threads) {
  const auto n = static_cast<Eigen::Index>(model.size());
  SpectralTracks tracks;
  tracks.times = grid;
  tracks.energies.resize(static_cast<Eigen::Index>(grid.size()), n);
  std::vector<Eigen::MatrixXd> vectors(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_at(model, grid[i]));
    tracks.energies.row(static_cast<Eigen::Index>(i)) = solver.eigenvalues().transpose();
    vectors[i] = solver.eigenvectors();
  });

  tracks.labels.resize(grid.size());
  if (grid.empty()) return tracks;
  tracks.labels[0].resize(static_cast<std::size_t>(n));
  std::iota(tracks.labels[0].begin(), tracks.labels[0].end(), std::size_t{0});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Eigen::MatrixXd overlap = (vectors[i - 1].transpose() * vectors[i]).cwiseAbs();
    std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> candidates;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index k = 0; k < n; ++k) candidates.emplace_back(-overlap(p, k), p, k);
    std::sort(candidates.begin(), candidates.end());
    std::vector<bool> used_prev(static_cast<std::size_t>(n), false), used_cur(static_cast<std::size_t>(n), false);
    tracks.labels[i].assign(static_cast<std::size_t>(n), 0);
    for (const auto& [neg, p, k] : candidates) {
      const auto up = static_cast<std::size_t>(p), uk = static_cast<std::size_t>(k);
      if (used_prev[up] || used_cur[uk]) continue;
      used_prev[up] = used_cur[uk] = true;
      tracks.labels[i][uk] = tracks.labels[i - 1][up];
    }
  }
  return tracks;
}

double perturbative_energy(const MLZModel& model, std::size_t a, double t) {
  const double ea = model.diabatic_energy(a, t);
  double energy = ea;
  for (std::size_t b = 0; b < model.size(); ++b) {
    if (!model.coupled(a, b)) continue;
    const double g = model.coupling(a, b);
    energy += g * g / (ea - model.diabatic_energy(b, t));
  }
  return energy;
}

double perturbative_energy(const MTLZFamily& family, std::size_t j, std::size_t a, const Eigen::VectorXd& tau) {
  validate(family);
  const Eigen::MatrixXd h = family.hamiltonian(j, tau);
  const auto ia = static_cast<Eigen::Index>(a);
  double energy = h(ia, ia);
  for (Eigen::Index b = 0; b < h.rows(); ++b) {
    if (b == ia || h(ia, b) == 0.0) continue;
    energy += h(ia, b) * h(ia, b) / (h(ia, ia) - h(b, b));
  }
  return energy;
}

Window crossing_window(const MLZModel& model) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t a = 0; a < model.size(); ++a)
    for (std::size_t b = a + 1; b < model.size(); ++b) {
      if (model.slope(a) == model.slope(b)) continue;
      const double t = model.crossing_time(a, b);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const double margin = std::max(1.0, 0.5 * (hi - lo));
  return {lo - margin, hi + margin};
}

std::size_t CrossingScan::exact_count() const {
  return static_cast<std::size_t>(std::count_if(minima.begin(), minima.end(), [](const auto& r) { return r.exact; }));
}

std::vector<CrossingRecord> CrossingScan::exact() const {
  std::vector<CrossingRecord> out;
  std::copy_if(minima.begin(), minima.end(), std::back_inserter(out), [](const auto& r) { return r.exact; });
  return out;
}

double CrossingScan::smallest_avoided_gap() const {
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& r : minima)
    if (!r.exact) smallest = std::min(smallest, r.gap / spectral_range);
  return smallest;
}

namespace {

double gap_at(const MLZModel& model, std::size_t k, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_at(model, t), Eigen::EigenvaluesOnly);
  const auto i = static_cast<Eigen::Index>(k);
  return solver.eigenvalues()(i + 1) - solver.eigenvalues()(i);
}

// Golden-section search for the minimum of the gap on [lo, hi].
std::pair<double, double> golden_minimum(const MLZModel& model, std::size_t k, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = gap_at(model, k, x1), f2 = gap_at(model, k, x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = gap_at(model, k, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = gap_at(model, k, x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Interior local minima of samples g.
std::vector<std::size_t> local_minima(const std::vector<double>& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (g[i] < g[i - 1] && g[i] <= g[i + 1]) out.push_back(i);
  return out;
}

}  // namespace

CrossingScan scan_gap_minima(const MLZModel& model, const CrossingOptions& options) {
  CrossingScan scan;
  scan.window = options.window ? *options.window : crossing_window(model);
  auto grid = linear_grid(scan.window.t_min, scan.window.t_max, options.grid_points);
  // Crossings can cluster far more tightly than the uniform spacing, so every
  // diabatic crossing time also gets a fine local grid two cells wide on each side.
  const double spacing = grid[1] - grid[0];
  constexpr std::size_t kLocalPoints = 81;
  for (std::size_t a = 0; a < model.size(); ++a)
    for (std::size_t b = a + 1; b < model.size(); ++b) {
      if (model.slope(a) == model.slope(b)) continue;
      const double t = model.crossing_time(a, b);
      const double lo = std::max(scan.window.t_min, t - 2.0 * spacing);
      const double hi = std::min(scan.window.t_max, t + 2.0 * spacing);
      if (!(lo < hi)) continue;
      const auto local = linear_grid(lo, hi, kLocalPoints);
      grid.insert(grid.end(), local.begin(), local.end());
    }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double x, double y) { return y - x < 1e-6 * spacing; }),
             grid.end());
  const SpectralTracks tracks = adiabatic_energies(model, grid, options.threads);
  const std::size_t n = model.size();
  for (Eigen::Index i = 0; i < tracks.energies.rows(); ++i)
    scan.spectral_range =
        std::max(scan.spectral_range, tracks.energies(i, static_cast<Eigen::Index>(n) - 1) - tracks.energies(i, 0));
  const double threshold = options.exact_tolerance * scan.spectral_range;

  constexpr std::size_t kSubgrid = 41;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      g[i] = tracks.energies(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k) + 1) -
             tracks.energies(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));

    std::vector<CrossingRecord> found;
    for (std::size_t i : local_minima(g)) {
      // Re-grid the bracket so that minima closer than the grid spacing separate.
      const auto sub = linear_grid(grid[i - 1], grid[i + 1], kSubgrid);
      std::vector<double> sg(sub.size());
      for (std::size_t s = 0; s < sub.size(); ++s) sg[s] = gap_at(model, k, sub[s]);
      auto sub_minima = local_minima(sg);
      if (sub_minima.empty()) sub_minima.push_back(static_cast<std::size_t>(
          std::min_element(sg.begin() + 1, sg.end() - 1) - sg.begin()));
      for (std::size_t s : sub_minima) {
        const auto [t, gap] = golden_minimum(model, k, sub[s - 1], sub[s + 1]);
        CrossingRecord rec;
        rec.lower = k;
        rec.time = t;
        rec.gap = gap;
        rec.exact = gap < threshold;
        found.push_back(rec);
      }
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.time < y.time; });
    for (const auto& rec : found) {
      auto& list = scan.minima;
      const bool merge = !list.empty() && list.back().lower == k &&
                         std::abs(list.back().time - rec.time) <= 1e-9 * std::max(1.0, std::abs(rec.time));
      if (merge) {
        list.back().ambiguous = true;
        list.back().exact = list.back().exact || rec.exact;
        list.back().gap = std::min(list.back().gap, rec.gap);
      } else {
        list.push_back(rec);
      }
    }
  }
  std::stable_sort(scan.minima.begin(), scan.minima.end(),
                   [](const auto& x, const auto& y) { return x.time < y.time; });
  return scan;
}

std::vector<CrossingRecord> locate_exact_crossings(const MLZModel& model, const CrossingOptions& options) {
  return scan_gap_minima(model, options).exact();
}

std::size_t expected_crossing_count(std::size_t n) {
  if (n < 2) throw ModelError("expected_crossing_count: at least two levels are required");
  const auto m = static_cast<long long>(n);
  return static_cast<std::size_t>(1 + (m - 2) * (m - 3) / 2);
}

}  // namespace mlz
