// recipes.hpp - built-in parameter sets and a generator of
// random two-band models that satisfy every constraint.

#pragma once

#include "mlz/model.hpp"
#include "mlz/model_spec.hpp"
#include "mlz/propagator.hpp"
#include "mlz/sweep.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mlz {

/// Two-band spec with g1_i = w_i g sqrt|b_i/b - 1|. The closure holds exactly
/// when the w_i^2 of levels above b and below -b have equal sums.
TwoBandSpec weighted_two_band(double b, const std::vector<double>& slopes, const std::vector<int>& lambda,
                              const std::vector<double>& weights, double g, double e = 1.0);

/// Five-state diagram setup: b = 1, b_i = (4, 2, -3), lambda from the sign case.
TwoBandSpec five_state_diagram_spec(int table_case, double g = 0.2);

/// Five-state setup used for the coupling sweep: b_i = (4, 2, -2.5),
/// weights (1, 1, sqrt 2), all lambda = 1.
TwoBandSpec five_state_spec(double g, const std::vector<int>& lambda = {1, 1, 1});

/// Six-state setup: b_i = (4, 2, -2.5, -5), lambda = (-1, 1, 1, 1), weights (1, 3, 2, sqrt 6).
TwoBandSpec six_state_spec(double g);

/// Ten-state setup: b_i = (7, 5, 4, 2.5, 2, -1.5, -3, -3.5), all lambda = 1,
/// weights 1 for levels 3..8 and sqrt 2 for levels 9, 10.
TwoBandSpec ten_state_spec(double g);

/// Crossing-count patterns for n = 5..10 levels.
std::vector<int> crossing_lambda_pattern(std::size_t n);

/// Random valid two-band spec with the given lambda signs: b = 1, slopes at
/// least 0.3 apart with both signs present, the last coupling fixed by the
/// closure, e in [0.5, 2].
TwoBandSpec random_two_band(std::mt19937_64& rng, const std::vector<int>& lambda);

/// Random bowtie spec with kappa = 0 (the last gamma is solved for).
BowtieSpec random_bowtie(std::mt19937_64& rng, std::size_t outer_levels);

/// Distorted Tavis-Cummings setup with three spins: epsilon = (2.4, 0, -1),
/// g = 0.2, N_B = 0, gamma = 2, beta = 1.
DTCMSpec three_spin_dtcm();

/// Named built-in configuration.
struct Recipe {
  std::string name;
  std::string description;
  ModelSpec model;
  std::vector<SweepAxis> axes;  // empty for single-point recipes
  PropagationConfig propagation;
  std::vector<std::size_t> rows_of_interest;  // 0-based initial levels emphasized in the reference
};

std::vector<std::string> recipe_names();

/// Throws ConfigError for an unknown name. `seed` drives the random
/// parameters of the crossing-count recipes.
Recipe make_recipe(const std::string& name, std::uint64_t seed = 1);

}  // namespace mlz
