#include "mlz/recipes.hpp"

#include "mlz/closed_form.hpp"
#include "mlz/error.hpp"

#include <algorithm>
#include <cmath>

namespace mlz {

TwoBandSpec weighted_two_band(double b, const std::vector<double>& slopes, const std::vector<int>& lambda,
                              const std::vector<double>& weights, double g, double e) {
  if (slopes.size() != weights.size()) throw ModelError("weighted_two_band: one weight per slope is required");
  TwoBandSpec spec;
  spec.b = b;
  spec.e = e;
  spec.slopes = slopes;
  spec.lambda = lambda;
  for (std::size_t i = 0; i < slopes.size(); ++i)
    spec.g1.push_back(weights[i] * g * std::sqrt(std::abs(slopes[i] / b - 1.0)));
  return spec;
}

TwoBandSpec five_state_diagram_spec(int table_case, double g) {
  const auto lam = five_state_lambda(table_case);
  return weighted_two_band(1.0, {4.0, 2.0, -3.0}, {lam[0], lam[1], lam[2]}, {1.0, 1.0, std::sqrt(2.0)}, g);
}

TwoBandSpec five_state_spec(double g, const std::vector<int>& lambda) {
  return weighted_two_band(1.0, {4.0, 2.0, -2.5}, lambda, {1.0, 1.0, std::sqrt(2.0)}, g);
}

TwoBandSpec six_state_spec(double g) {
  return weighted_two_band(1.0, {4.0, 2.0, -2.5, -5.0}, {-1, 1, 1, 1}, {1.0, 3.0, 2.0, std::sqrt(6.0)}, g);
}

TwoBandSpec ten_state_spec(double g) {
  const double r2 = std::sqrt(2.0);
  return weighted_two_band(1.0, {7.0, 5.0, 4.0, 2.5, 2.0, -1.5, -3.0, -3.5}, std::vector<int>(8, 1),
                           {1, 1, 1, 1, 1, 1, r2, r2}, g);
}

std::vector<int> crossing_lambda_pattern(std::size_t n) {
  switch (n) {
    case 5: return {1, -1, -1};
    case 6: return {-1, 1, -1, 1};
    case 7: return {1, 1, -1, -1, 1};
    case 8: return {-1, -1, 1, 1, -1, 1};
    case 9: return {1, 1, 1, 1, -1, 1, -1};
    case 10: return std::vector<int>(8, 1);
    default: throw ConfigError("no crossing-count pattern for " + std::to_string(n) + " levels");
  }
}

TwoBandSpec random_two_band(std::mt19937_64& rng, const std::vector<int>& lambda) {
  const std::size_t m = lambda.size();
  if (m < 2) throw ModelError("random_two_band: at least two outer levels are required");
  std::uniform_real_distribution<double> magnitude(1.3, 7.0), weight(0.1, 0.35), scale(0.5, 2.0);
  std::uniform_int_distribution<std::size_t> positives(1, m - 1);

  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> signs(m, -1);
    std::fill_n(signs.begin(), positives(rng), 1);
    std::shuffle(signs.begin(), signs.end(), rng);

    TwoBandSpec spec;
    spec.b = 1.0;
    spec.lambda = lambda;
    for (std::size_t i = 0; i < m; ++i) spec.slopes.push_back(signs[i] * magnitude(rng));
    bool separated = true;
    for (std::size_t i = 0; i < m && separated; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(spec.slopes[i] - spec.slopes[j]) < 0.3) separated = false;
    if (!separated) continue;

    for (std::size_t i = 0; i < m; ++i) spec.g1.push_back(weight(rng) * std::sqrt(std::abs(spec.slopes[i] - 1.0)));
    try {
      spec.g1.back() = solve_coupling_closure(spec, m - 1);
    } catch (const ModelError&) {
      continue;
    }
    const double w_last = spec.g1.back() / std::sqrt(std::abs(spec.slopes.back() - 1.0));
    if (w_last < 0.05 || w_last > 0.5) continue;
    spec.e = scale(rng);
    return spec;
  }
  throw ModelError("random_two_band: no admissible draw");
}

BowtieSpec random_bowtie(std::mt19937_64& rng, std::size_t outer_levels) {
  if (outer_levels < 2) throw ModelError("random_bowtie: at least two outer levels are required");
  std::uniform_real_distribution<double> magnitude(0.2, 3.0), coupling(0.05, 0.4), speed(0.5, 2.0), offset(-2.0, 2.0);
  std::bernoulli_distribution coin(0.5);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    BowtieSpec spec;
    spec.a = speed(rng);
    spec.e = offset(rng);
    bool positive = false, negative = false, admissible = true;
    std::vector<double> pulled;
    for (std::size_t i = 0; i < outer_levels; ++i) {
      const double beta = (coin(rng) ? 1.0 : -1.0) * magnitude(rng);
      if (std::abs(std::abs(beta) - 0.5) < 0.05) admissible = false;
      (beta > 0 ? positive : negative) = true;
      spec.beta.push_back(beta);
      spec.gamma.push_back((coin(rng) ? 1.0 : -1.0) * coupling(rng));
      pulled.push_back(beta + 1.0 / (4.0 * beta));
    }
    for (std::size_t i = 0; i < pulled.size() && admissible; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(pulled[i] - pulled[j]) < 1e-3) admissible = false;
    if (!admissible || !positive || !negative) continue;

    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < outer_levels; ++i) partial += spec.gamma[i] * spec.gamma[i] / spec.beta[i];
    const double g2 = -partial * spec.beta.back();
    if (!(g2 > 0.0)) continue;
    spec.gamma.back() = (spec.gamma.back() < 0 ? -1.0 : 1.0) * std::sqrt(g2);
    return spec;
  }
  throw ModelError("random_bowtie: no admissible draw");
}

DTCMSpec three_spin_dtcm() {
  DTCMSpec spec;
  spec.n_spins = 3;
  spec.n_bosons = 0;
  spec.beta = 1.0;
  spec.gamma_distort = 2.0;
  spec.epsilon = {2.4, 0.0, -1.0};
  spec.g = 0.2;
  return spec;
}

std::vector<std::string> recipe_names() {
  return {"fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f", "fig3a",
          "fig3b", "fig5a", "fig5b", "fig6",  "fig7a", "fig7b"};
}

Recipe make_recipe(const std::string& name, std::uint64_t seed) {
  Recipe r;
  r.name = name;
  const std::vector<double> b3_values{2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0};
  if (name.size() == 5 && name.rfind("fig1", 0) == 0 && name[4] >= 'a' && name[4] <= 'f') {
    const std::size_t n = 5 + static_cast<std::size_t>(name[4] - 'a');
    std::mt19937_64 rng(seed);
    r.model = random_two_band(rng, crossing_lambda_pattern(n));
    r.description = std::to_string(n) + "-level two-band model with random parameters (adiabatic spectrum)";
  } else if (name == "fig3a") {
    r.model = five_state_spec(1.0);
    r.axes = {{"coupling_scale", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4}}};
    r.rows_of_interest = {0};
    r.description = "5-level model, transitions from level 1 versus coupling g";
  } else if (name == "fig3b") {
    r.model = five_state_spec(0.18);
    r.axes = {{"b_3", b3_values}};
    r.rows_of_interest = {2};
    r.description = "5-level model, transitions from level 3 versus b_3 at fixed g1_3^2/(b_3-b)";
  } else if (name == "fig5a") {
    r.model = six_state_spec(1.0);
    r.axes = {{"coupling_scale", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}}};
    r.rows_of_interest = {0, 2};
    r.description = "6-level model, transitions from levels 1 and 3 versus coupling g";
  } else if (name == "fig5b") {
    r.model = six_state_spec(0.22);
    r.axes = {{"b_3", b3_values}};
    r.rows_of_interest = {2};
    r.description = "6-level model, transitions from level 3 versus b_3 at fixed g1_3^2/(b_3-b)";
  } else if (name == "fig6") {
    r.model = ten_state_spec(1.0);
    r.axes = {{"coupling_scale", {0.05, 0.1, 0.15, 0.2, 0.25}}};
    r.propagation.t_start = -100.0;
    r.propagation.t_end = 100.0;
    r.propagation.dt = 0.01;
    r.rows_of_interest = {0};
    r.description = "10-level model, transitions from level 1 versus coupling g";
  } else if (name == "fig7a") {
    r.model = three_spin_dtcm();
    r.description = "distorted Tavis-Cummings model with three spins (adiabatic spectrum)";
  } else if (name == "fig7b") {
    r.model = TwoByThreeSpec{};
    r.description = "distorted 2x3 model (adiabatic spectrum)";
  } else {
    throw ConfigError("unknown recipe '" + name + "'");
  }
  return r;
}

}  // namespace mlz
