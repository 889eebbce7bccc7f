// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "support.hpp"

#include "mlz/closed_form.hpp"
#include "mlz/error.hpp"
#include "mlz/family.hpp"
#include "mlz/integrability.hpp"
#include "mlz/model_spec.hpp"
#include "mlz/propagator.hpp"
#include "mlz/recipes.hpp"
#include "mlz/semiclassics.hpp"
#include "mlz/spectra.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

using namespace mlz;
using test::max_abs_diff;
using test::stochastic_defect;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

double stay(const MLZModel& m, std::size_t i) { return lz_probability(m.coupling(0, i), m.slope(0), m.slope(i)); }

int sign_case(const TwoBandSpec& spec) {
  for (int c = 1; c <= 8; ++c) {
    const auto l = five_state_lambda(c);
    if (std::equal(l.begin(), l.end(), spec.lambda.begin())) return c;
  }
  throw ModelError("no five-state sign case for these lambda");
}

bool is_two_band(const std::string& name) {
  return name.find("dtcm") == std::string::npos && name.find("2x3") == std::string::npos;
}

MLZModel scaled_offset(const MLZModel& m, std::size_t i, double factor) {
  Eigen::VectorXd e = m.offsets();
  e(static_cast<Eigen::Index>(i)) *= factor;
  return MLZModel(m.slopes(), e, m.couplings());
}

MLZModel scaled_coupling(const MLZModel& m, std::size_t a, std::size_t b, double factor) {
  Eigen::MatrixXd c = m.couplings();
  c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *= factor;
  c(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) *= factor;
  return MLZModel(m.slopes(), m.offsets(), c);
}

bool ic_pass(const MLZModel& m) {
  const ICReport r = check_integrability(m);
  return r.ic1_pass && r.ic2_pass;
}

// Closed-form five-state matrices against the path sum in all eight sign cases.
Outcome closed_forms() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (double g : {0.05, 0.2, 0.4}) {
    for (int c = 1; c <= 8; ++c) {
      const MLZModel m = build_two_band(five_state_diagram_spec(c, g));
      const TransitionMatrix semi = semiclassical_matrix(build_diagram(m));
      worst = std::max(worst, max_abs_diff(semi, closed_form_five_state(five_state_phase(c), stay(m, 2), stay(m, 3))));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-12 && elapsed < 1.0, fmt("max deviation %.2e over 24 models, %.3f s", worst, elapsed)};
}

// Five-state numerics over the coupling sweep against the phase-one closed form.
Outcome five_state_sweep() {
  const auto start = Clock::now();
  const Recipe r = make_recipe("fig3a");
  const int c = sign_case(std::get<TwoBandSpec>(r.model));
  double worst = 0.0;
  for (double g : r.axes.front().values) {
    const MLZModel m = build_model(with_parameter(r.model, "coupling_scale", g));
    const TransitionMatrix num = numeric_transition_matrix(m, r.propagation);
    worst = std::max(worst, max_abs_diff(num, closed_form_five_state(five_state_phase(c), stay(m, 2), stay(m, 3))));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-2 && elapsed <= 120.0,
          fmt("max |P_num - closed form| %.2e over %g couplings, %.1f s", worst,
              static_cast<double>(r.axes.front().values.size()), elapsed)};
}

// Six-state rows of levels 1 and 3 against numerics, and invariance of the
// numerical matrices under the slope deformation.
Outcome six_state_and_invariance() {
  const Recipe six = make_recipe("fig5a");
  double rows = 0.0;
  for (double g : six.axes.front().values) {
    const MLZModel m = build_model(with_parameter(six.model, "coupling_scale", g));
    const TransitionMatrix num = numeric_transition_matrix(m, six.propagation);
    const std::array<double, 4> p{stay(m, 2), stay(m, 3), stay(m, 4), stay(m, 5)};
    for (std::size_t from : {std::size_t{0}, std::size_t{2}})
      rows = std::max(rows, (num.col(static_cast<Eigen::Index>(from)) - closed_form_six_state_row(from, p))
                                .cwiseAbs()
                                .maxCoeff());
  }
  double drift = 0.0;
  for (const char* name : {"fig3b", "fig5b"}) {
    const Recipe r = make_recipe(name);
    const auto& axis = r.axes.front();
    std::optional<TransitionMatrix> reference;
    for (double b3 : axis.values) {
      const TransitionMatrix num = numeric_transition_matrix(build_model(with_parameter(r.model, axis.name, b3)),
                                                             r.propagation);
      if (!reference) reference = num;
      drift = std::max(drift, max_abs_diff(num, *reference));
    }
  }
  return {rows <= 1e-2 && drift < 1e-2,
          fmt("rows 1,3 max deviation %.2e; b_3 sweep max change %.2e", rows, drift)};
}

// Ten-state row of level 1 against numerics.
Outcome ten_state_row() {
  const auto start = Clock::now();
  const Recipe r = make_recipe("fig6");
  double worst = 0.0;
  for (double g : r.axes.front().values) {
    const MLZModel m = build_model(with_parameter(r.model, "coupling_scale", g));
    PropagationConfig c = r.propagation;
    c.initial_level = 0;
    const Eigen::VectorXcd psi = propagate(m, c);
    std::vector<double> p;
    for (std::size_t i = 2; i < 10; ++i) p.push_back(stay(m, i));
    worst = std::max(worst, (psi.cwiseAbs2() - closed_form_ten_state_row(p)).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(start);
  return {worst <= 2e-2 && elapsed <= 300.0,
          fmt("max deviation %.2e at T=+-%g, dt=%g, %.1f s", worst, r.propagation.t_end, r.propagation.dt, elapsed)};
}

Outcome crossing_counts() {
  std::ostringstream detail;
  bool pass = true;
  const std::vector<std::pair<std::size_t, std::size_t>> expected{{5, 4}, {6, 7}, {7, 11}, {8, 16}};
  for (const auto& [n, count] : expected) {
    const std::string recipe = std::string("fig1") + static_cast<char>('a' + (n - 5));
    std::size_t hits = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const MLZModel m = build_model(make_recipe(recipe, seed).model);
      if (locate_exact_crossings(m).size() == count) ++hits;
    }
    pass = pass && hits == 6;
    detail << "N=" << n << ": " << hits << "/6 give " << count << "; ";
  }
  const std::size_t dtcm = locate_exact_crossings(build_model(make_recipe("fig7a").model)).size();
  const std::size_t two_by_three = locate_exact_crossings(build_model(make_recipe("fig7b").model)).size();
  pass = pass && dtcm == 10 && two_by_three == 6;
  detail << "DTCM " << dtcm << " (10), 2x3 " << two_by_three << " (6)";
  return {pass, detail.str()};
}

Outcome bowtie_families() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double commutator = 0.0, residual = 0.0;
  std::size_t mtlz_failures = 0, validation_failures = 0;
  for (int k = 0; k < 100; ++k) {
    const BowtieSpec spec = random_bowtie(rng, 2 + static_cast<std::size_t>(k % 6));
    const MTLZFamily f = build_bowtie_family(spec);
    for (int s = 0; s < 10; ++s) {
      const Eigen::Vector2d tau(u(rng), u(rng));
      const Eigen::MatrixXd h0 = f.hamiltonian(0, tau), h1 = f.hamiltonian(1, tau);
      commutator = std::max(commutator, (h0 * h1 - h1 * h0).norm());
    }
    if (!check_mtlz(f).passed) ++mtlz_failures;
    const MLZModel pulled = pullback_contour(f, bowtie_contour(spec));
    try {
      const TwoBandResiduals r = two_band_residuals(pulled);
      residual = std::max(residual, r.max_residual());
      const TwoBandSpec extracted = extract_two_band(pulled);
      validate(extracted);
      (void)build_two_band(extracted);
      if (!r.sign_consistent || !(r.slope_margin > 0.0) || !(r.max_residual() < 1e-10)) ++validation_failures;
    } catch (const Error&) {
      ++validation_failures;
    }
  }
  return {commutator < 1e-10 && mtlz_failures == 0 && validation_failures == 0,
          fmt("max ||[H0,H1]|| %.2e, mtlz failures %g, pullback residual %.2e, validation failures %g", commutator,
              static_cast<double>(mtlz_failures), residual, static_cast<double>(validation_failures))};
}

Outcome ic_suite() {
  std::size_t corpus_failures = 0, violations = 0, undetected = 0;
  double chain_spread = 0.0;
  for (const auto& [name, m] : test::integrable_corpus()) {
    if (!ic_pass(m)) ++corpus_failures;

    // Single-parameter violations: each nonzero offset and each coupling off by 1%.
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m.offset(a) != 0.0) {
        ++violations;
        if (ic_pass(scaled_offset(m, a, 1.01))) ++undetected;
      }
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        if (!m.coupled(a, b)) continue;
        ++violations;
        if (ic_pass(scaled_coupling(m, a, b, 1.01))) ++undetected;
      }
    }

    // Every route of length at most two between two levels carries the same phase.
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t c = a + 1; c < m.size(); ++c) {
        std::vector<std::vector<std::size_t>> chains;
        if (m.coupled(a, c)) chains.push_back({});
        for (std::size_t k = 0; k < m.size(); ++k)
          if (k != a && k != c && m.coupled(a, k) && m.coupled(k, c)) chains.push_back({k});
        if (chains.size() < 2) continue;
        const double first = dynamical_phase(m, a, c, chains.front());
        for (std::size_t i = 1; i < chains.size(); ++i)
          chain_spread = std::max(chain_spread, std::abs(dynamical_phase(m, a, c, chains[i]) - first));
      }
    }
  }
  return {corpus_failures == 0 && undetected == 0 && chain_spread < 1e-10,
          fmt("corpus failures %g, undetected violations %g of %g, chain spread %.2e",
              static_cast<double>(corpus_failures), static_cast<double>(undetected),
              static_cast<double>(violations), chain_spread)};
}

Outcome structural_properties() {
  double semi_defect = 0.0, symmetry = 0.0, product = 0.0, lz_pairs = 0.0, numeric_defect = 0.0;
  for (const auto& [name, m] : test::integrable_corpus()) {
    const DiabaticDiagram d = build_diagram(m);
    const TransitionMatrix semi = semiclassical_matrix(d);
    semi_defect = std::max(semi_defect, stochastic_defect(semi));
    product = std::max(product, max_abs_diff(semi, scattering_product(d)));
    if (!is_two_band(name)) continue;
    symmetry = std::max(symmetry, max_abs_diff(semi, semi.transpose()));
    for (std::size_t i = 2; i < m.size(); ++i)
      lz_pairs = std::max(lz_pairs, std::abs(lz_probability(m.coupling(0, i), m.slope(0), m.slope(i)) -
                                             lz_probability(m.coupling(1, i), m.slope(1), m.slope(i))));
  }
  const std::vector<MLZModel> numeric_set{build_two_band(five_state_spec(0.2)), build_two_band(six_state_spec(0.2)),
                                          build_dtcm(three_spin_dtcm()), build_2x3(TwoByThreeSpec{})};
  for (const MLZModel& m : numeric_set)
    numeric_defect = std::max(numeric_defect, stochastic_defect(numeric_transition_matrix(m, PropagationConfig{})));
  return {semi_defect < 1e-12 && numeric_defect < 1e-4 && symmetry < 1e-12 && product < 1e-12 && lz_pairs < 1e-12,
          fmt("stochastic defect %.1e semiclassical / %.1e numeric; asymmetry %.1e; path sum vs product %.1e",
              semi_defect, numeric_defect, symmetry, product) +
              fmt("; |p_1i - p_2i| %.1e", lz_pairs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form five-state matrices", closed_forms},
      {"five-state coupling sweep vs numerics", five_state_sweep},
      {"six-state rows and slope invariance", six_state_and_invariance},
      {"ten-state row vs numerics", ten_state_row},
      {"exact crossing counts", crossing_counts},
      {"commuting bowtie families", bowtie_families},
      {"integrability conditions", ic_suite},
      {"structural properties", structural_properties},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& err) {
      out = {false, std::string("exception: ") + err.what()};
    }
    if (!out.pass) ++failures;
    std::printf("criterion %zu: %s  %s (%s)\n", k + 1, out.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
