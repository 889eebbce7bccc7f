#include "support.hpp"

#include "mlz/closed_form.hpp"
#include "mlz/error.hpp"
#include "mlz/model_spec.hpp"
#include "mlz/recipes.hpp"
#include "mlz/semiclassics.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace mlz;
using test::max_abs_diff;

namespace {

std::pair<std::size_t, std::size_t> pair_of(const Crossing& c) { return {c.a, c.b}; }

double stay(const MLZModel& m, std::size_t i) { return lz_probability(m.coupling(0, i), m.slope(0), m.slope(i)); }

}  // namespace

TEST_CASE("two-state diagram") {
  const MLZModel m = test::two_state(0.3, 1.0, 2.0);
  const DiabaticDiagram d = build_diagram(m);
  REQUIRE(d.crossings.size() == 1);
  CHECK(d.crossings[0].time == doctest::Approx(-1.0));
  const TransitionMatrix p = scattering_product(d);
  const double lz = lz_probability(0.3, 1.0, -1.0);
  CHECK(p(0, 0) == doctest::Approx(lz));
  CHECK(p(1, 0) == doctest::Approx(1.0 - lz));
  CHECK(enumerate_paths(d, 0, 0).size() == 1);
}

TEST_CASE("crossing order of the first sign case and its reversal") {
  using P = std::pair<std::size_t, std::size_t>;
  // t14 < t13 < t23 < t24 < 0 < t15 < t25, levels 1-based.
  const std::vector<P> case1{{0, 3}, {0, 2}, {1, 2}, {1, 3}, {0, 4}, {1, 4}};
  const DiabaticDiagram d1 = build_diagram(build_two_band(five_state_diagram_spec(1)));
  std::vector<P> got;
  for (const auto& c : d1.crossings) got.push_back(pair_of(c));
  CHECK(got == case1);
  CHECK(d1.crossings[3].time < 0.0);
  CHECK(d1.crossings[4].time > 0.0);

  const DiabaticDiagram d8 = build_diagram(build_two_band(five_state_diagram_spec(8)));
  std::vector<P> reversed;
  for (const auto& c : d8.crossings) reversed.push_back(pair_of(c));
  CHECK(reversed == std::vector<P>(case1.rbegin(), case1.rend()));
}

TEST_CASE("crossing times of the two-band diagram") {
  const TwoBandSpec spec = five_state_diagram_spec(3);
  const MLZModel m = build_two_band(spec);
  const auto tau = derived_tau(spec);
  for (const auto& c : build_diagram(m).crossings) {
    const std::size_t i = c.b - 2;
    const double bi = spec.slopes[i];
    const double r = std::sqrt((bi + spec.b) / (bi - spec.b));
    const double expected = -spec.rho * tau[i] * spec.e / spec.b * (c.a == 0 ? r : 1.0 / r);
    CHECK(c.time == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("trajectories") {
  const DiabaticDiagram d = build_diagram(build_two_band(five_state_diagram_spec(1)));
  CHECK(enumerate_paths(d, 3, 4).size() == 3);
  for (const auto& path : enumerate_paths(d, 3, 4)) {
    CHECK(path.levels.front() == 3);
    CHECK(path.levels.back() == 4);
    for (std::size_t k = 1; k < path.crossings.size(); ++k) CHECK(path.crossings[k] > path.crossings[k - 1]);
  }

  // An isolated level connects to nothing else.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
  c(0, 1) = c(1, 0) = 0.2;
  const DiabaticDiagram iso = build_diagram(MLZModel(Eigen::Vector3d(1, -1, 0.5), Eigen::Vector3d(0, 1, 2), c));
  CHECK(enumerate_paths(iso, 2, 0).empty());
  CHECK(enumerate_paths(iso, 2, 2).size() == 1);
  CHECK(path_amplitude(iso, enumerate_paths(iso, 2, 2)[0]) == std::complex<double>(1.0, 0.0));

  CHECK_THROWS_AS(enumerate_paths(build_diagram(build_two_band(ten_state_spec(0.2))), 0, 9, 2), NumericalError);
}

TEST_CASE("path amplitude factors") {
  const MLZModel m = test::two_state(-0.25);
  const DiabaticDiagram d = build_diagram(m);
  const auto switching = enumerate_paths(d, 0, 1);
  REQUIRE(switching.size() == 1);
  const std::complex<double> amp = path_amplitude(d, switching[0]);
  CHECK(std::abs(amp - std::complex<double>(0.0, -std::sqrt(d.crossings[0].q))) < 1e-15);

  // Staying through k crossings with one p gives p^(k/2).
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  for (int j = 1; j < 4; ++j) c(0, j) = c(j, 0) = 0.2;
  const MLZModel star(Eigen::Vector4d(2, 0, 0, 0), Eigen::Vector4d(0, 1, 2, 3), c);
  const DiabaticDiagram ds = build_diagram(star);
  const auto stays = enumerate_paths(ds, 0, 0);
  REQUIRE(stays.size() == 1);
  const double p = ds.crossings[0].p;
  CHECK(std::abs(path_amplitude(ds, stays[0]) - std::pow(p, 1.5)) < 1e-15);
}

TEST_CASE("closed forms reproduce the path sum in every sign case") {
  for (int c = 1; c <= 8; ++c) {
    CAPTURE(c);
    const MLZModel m = build_two_band(five_state_diagram_spec(c));
    const TransitionMatrix semi = semiclassical_matrix(build_diagram(m));
    const TransitionMatrix closed = closed_form_five_state(five_state_phase(c), stay(m, 2), stay(m, 3));
    CHECK(max_abs_diff(semi, closed) < 1e-12);
    CHECK(test::stochastic_defect(closed) < 1e-12);
  }
}

TEST_CASE("closed-form entries") {
  const double p3 = 0.3, p4 = 0.6, p5 = p3 * p4;
  const TransitionMatrix one = closed_form_five_state(FiveStatePhase::one, p3, p4);
  const Eigen::VectorXd row = one.col(0);
  CHECK(row(0) == doctest::Approx(p3 * p3 * p4 * p4));
  CHECK(row(1) == 0.0);
  CHECK(row(2) == doctest::Approx(p3 * p4 * (1 - p3)));
  CHECK(row(3) == doctest::Approx(p3 * p3 * p4 * (1 - p4)));
  CHECK(row(4) == doctest::Approx(1 - p5));
  CHECK(closed_form_five_state(FiveStatePhase::three, p3, p4)(2, 2) == doctest::Approx(p3 * p3));

  // The closure makes the stay probabilities above and below the central band
  // multiply to the same value: p3 p4 = p5 p6 here.
  const Eigen::VectorXd six = closed_form_six_state_row(2, {0.3, 0.5, 0.6, 0.25});
  CHECK(six(3) == 0.0);
  CHECK(six.sum() == doctest::Approx(1.0));
  CHECK(closed_form_six_state_row(0, {0.3, 0.5, 0.6, 0.25}).sum() == doctest::Approx(1.0));

  // p3 ... p7 = p8 p9 p10.
  std::vector<double> p{0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.5, 0.0};
  p.back() = p[0] * p[1] * p[2] * p[3] * p[4] / (p[5] * p[6]);
  const Eigen::VectorXd ten = closed_form_ten_state_row(p);
  CHECK(ten(9) == doctest::Approx(1.0 - p.back()));
  CHECK(ten.sum() == doctest::Approx(1.0));
}

TEST_CASE("six- and ten-state rows match the path sum") {
  const MLZModel six = build_two_band(six_state_spec(0.2));
  const TransitionMatrix p6 = semiclassical_matrix(build_diagram(six));
  const std::array<double, 4> q6{stay(six, 2), stay(six, 3), stay(six, 4), stay(six, 5)};
  for (std::size_t from : {std::size_t{0}, std::size_t{2}})
    CHECK((p6.col(static_cast<Eigen::Index>(from)) - closed_form_six_state_row(from, q6)).cwiseAbs().maxCoeff() <
          1e-12);

  const MLZModel ten = build_two_band(ten_state_spec(0.15));
  const TransitionMatrix p10 = semiclassical_matrix(build_diagram(ten));
  std::vector<double> q10;
  for (std::size_t i = 2; i < 10; ++i) q10.push_back(stay(ten, i));
  CHECK((p10.col(0) - closed_form_ten_state_row(q10)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("structural properties on the corpus") {
  for (const auto& [name, model] : test::integrable_corpus()) {
    CAPTURE(name);
    const DiabaticDiagram d = build_diagram(model);
    const TransitionMatrix semi = semiclassical_matrix(d);
    CHECK(test::stochastic_defect(semi) < 1e-12);
    CHECK(max_abs_diff(semi, scattering_product(d)) < 1e-12);
    if (name.find("dtcm") == std::string::npos && name.find("2x3") == std::string::npos)
      CHECK(max_abs_diff(semi, semi.transpose()) < 1e-12);
  }
}

TEST_CASE("invariances of two-band matrices") {
  const TwoBandSpec base = six_state_spec(0.25);
  const TransitionMatrix p0 = semiclassical_matrix(build_diagram(build_two_band(base)));
  SUBCASE("offset scale") {
    for (double e : {0.3, 2.0, 17.0}) {
      TwoBandSpec s = base;
      s.e = e;
      CHECK(max_abs_diff(semiclassical_matrix(build_diagram(build_two_band(s))), p0) < 1e-12);
    }
  }
  SUBCASE("slope deformation at fixed combinations") {
    for (double b3 : {2.5, 6.0, 10.0}) {
      const ModelSpec s = with_parameter(base, "b_3", b3);
      CHECK(max_abs_diff(semiclassical_matrix(build_diagram(build_model(s))), p0) < 1e-12);
    }
  }
  SUBCASE("all signs flipped") {
    for (int c = 1; c <= 4; ++c) {
      const auto pc = semiclassical_matrix(build_diagram(build_two_band(five_state_diagram_spec(c))));
      const auto pf = semiclassical_matrix(build_diagram(build_two_band(five_state_diagram_spec(9 - c))));
      CHECK(max_abs_diff(pc, pf) < 1e-12);
    }
  }
}

TEST_CASE("zero couplings give the identity") {
  const MLZModel m(Eigen::Vector3d(1, 0, -1), Eigen::Vector3d(0, 1, 2), Eigen::MatrixXd::Zero(3, 3));
  const DiabaticDiagram d = build_diagram(m);
  CHECK(d.crossings.empty());
  CHECK(semiclassical_matrix(d).isIdentity());
  CHECK(scattering_product(d).isIdentity());
}

TEST_CASE("simultaneous crossings") {
  // Four levels through one point: pairs (0,1) and (2,3) are disjoint and commute,
  // (0,1) and (0,2) share a level and are ambiguous.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  c(0, 1) = c(1, 0) = 0.1;
  c(2, 3) = c(3, 2) = 0.2;
  const MLZModel disjoint(Eigen::Vector4d(2, 1, -1, -2), Eigen::Vector4d::Zero(), c);
  const DiabaticDiagram d = build_diagram(disjoint);
  REQUIRE(d.tie_groups.size() == 1);
  CHECK_NOTHROW(require_unambiguous_order(d));
  CHECK(test::stochastic_defect(scattering_product(d)) < 1e-15);

  c(0, 2) = c(2, 0) = 0.3;
  const DiabaticDiagram shared = build_diagram(MLZModel(Eigen::Vector4d(2, 1, -1, -2), Eigen::Vector4d::Zero(), c));
  CHECK_THROWS_AS(require_unambiguous_order(shared), DegeneracyError);
  CHECK_THROWS_AS(scattering_product(shared), DegeneracyError);
}
