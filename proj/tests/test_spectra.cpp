#include "support.hpp"

#include "mlz/error.hpp"
#include "mlz/family.hpp"
#include "mlz/recipes.hpp"
#include "mlz/spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace mlz;

TEST_CASE("expected crossing count") {
  CHECK(expected_crossing_count(4) == 2);
  CHECK(expected_crossing_count(5) == 4);
  CHECK(expected_crossing_count(9) == 22);
  CHECK(expected_crossing_count(10) == 29);
  CHECK_THROWS_AS(expected_crossing_count(1), ModelError);
}

TEST_CASE("uncoupled tracks follow the diabatic lines") {
  const MLZModel m(Eigen::Vector3d(1, 0, -2), Eigen::Vector3d(0, 1, 2), Eigen::MatrixXd::Zero(3, 3));
  const auto grid = linear_grid(-5.0, 5.0, 41);
  const SpectralTracks tracks = adiabatic_energies(m, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> diabatic{m.diabatic_energy(0, grid[i]), m.diabatic_energy(1, grid[i]),
                                 m.diabatic_energy(2, grid[i])};
    std::sort(diabatic.begin(), diabatic.end());
    for (Eigen::Index k = 0; k < 3; ++k)
      CHECK(tracks.energies(static_cast<Eigen::Index>(i), k) ==
            doctest::Approx(diabatic[static_cast<std::size_t>(k)]));
    std::vector<std::size_t> labels = tracks.labels[i];
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<std::size_t>{0, 1, 2});
  }
}

TEST_CASE("two-state gap at the crossing") {
  const SpectralTracks tracks = adiabatic_energies(test::two_state(0.15), {0.0});
  CHECK(tracks.energies(0, 1) - tracks.energies(0, 0) == doctest::Approx(0.3));
  CHECK(locate_exact_crossings(test::two_state(0.15)).empty());
}

TEST_CASE("second-order energies") {
  const double g = 0.2, b = 1.0, t = 200.0;
  const MLZModel two = test::two_state(g, b);
  CHECK(perturbative_energy(two, 0, t) == doctest::Approx(b * t + g * g / (2 * b * t)).epsilon(1e-15));
  CHECK(perturbative_energy(two, 1, t) == doctest::Approx(-(b * t + g * g / (2 * b * t))).epsilon(1e-15));

  const MLZModel five = build_two_band(five_state_spec(0.2));
  for (double time : {-1e3, 1e3}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_at(five, time));
    std::vector<double> approx;
    for (std::size_t a = 0; a < 5; ++a) approx.push_back(perturbative_energy(five, a, time));
    std::sort(approx.begin(), approx.end());
    for (Eigen::Index k = 0; k < 5; ++k)
      CHECK(std::abs(solver.eigenvalues()(k) - approx[static_cast<std::size_t>(k)]) < 1e-6);
  }

  // The correction is second order: the residual shrinks like g^4.
  auto error_at = [](double coupling) {
    const MLZModel m = build_two_band(five_state_spec(coupling));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_at(m, 7.0));
    std::vector<double> approx;
    for (std::size_t a = 0; a < 5; ++a) approx.push_back(perturbative_energy(m, a, 7.0));
    std::sort(approx.begin(), approx.end());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < 5; ++k)
      worst = std::max(worst, std::abs(solver.eigenvalues()(k) - approx[static_cast<std::size_t>(k)]));
    return worst;
  };
  const double ratio = error_at(0.02) / error_at(0.01);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("second-order energies of a family Hamiltonian") {
  BowtieSpec spec;
  spec.beta = {1.5, -0.8};
  spec.gamma = {0.02, 0.02 * std::sqrt(0.8 / 1.5)};
  const MTLZFamily f = build_bowtie_family(spec);
  const Eigen::Vector2d tau(30.0, 11.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(f.hamiltonian(1, tau));
  std::vector<double> approx;
  for (std::size_t a = 0; a < 4; ++a) approx.push_back(perturbative_energy(f, 1, a, tau));
  std::sort(approx.begin(), approx.end());
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(solver.eigenvalues()(k) - approx[static_cast<std::size_t>(k)]) < 1e-8);
}

TEST_CASE("exact crossings of random two-band models") {
  for (std::size_t n = 5; n <= 8; ++n) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::mt19937_64 rng(seed);
      const MLZModel m = build_two_band(random_two_band(rng, crossing_lambda_pattern(n)));
      const CrossingScan scan = scan_gap_minima(m);
      CAPTURE(n);
      CAPTURE(seed);
      CHECK(scan.exact_count() == expected_crossing_count(n));
      for (const auto& r : scan.exact()) CHECK(r.gap < 1e-8 * scan.spectral_range);
      CHECK(scan.smallest_avoided_gap() > 1e-4);
    }
  }
}

TEST_CASE("exact crossings of the distorted models") {
  CHECK(locate_exact_crossings(build_dtcm(three_spin_dtcm())).size() == 10);
  CHECK(locate_exact_crossings(build_2x3(TwoByThreeSpec{})).size() == 6);
}

TEST_CASE("breaking the closure removes exact crossings") {
  const MLZModel m = build_two_band(five_state_spec(0.3));
  const std::size_t before = locate_exact_crossings(m).size();
  CHECK(before == 4);
  Eigen::MatrixXd c = m.couplings();
  // Both couplings of level 3 grow by 1%, keeping their ratio.
  for (Eigen::Index a : {0, 1}) {
    c(a, 2) *= 1.01;
    c(2, a) *= 1.01;
  }
  const MLZModel broken(m.slopes(), m.offsets(), c);
  CHECK(locate_exact_crossings(broken).size() < before);
}

TEST_CASE("explicit window and grid") {
  const MLZModel m = build_two_band(five_state_diagram_spec(1));
  CrossingOptions options;
  options.window = Window{-20.0, 20.0};
  options.grid_points = 501;
  const CrossingScan scan = scan_gap_minima(m, options);
  CHECK(scan.window.t_min == -20.0);
  CHECK(scan.exact_count() == 4);
  for (std::size_t k = 1; k < scan.minima.size(); ++k) CHECK(scan.minima[k - 1].time <= scan.minima[k].time);
}
