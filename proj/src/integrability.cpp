#include "mlz/integrability.hpp"

#include "mlz/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace mlz {

GammaMatrix gamma_matrix(const MLZModel& model) {
  const std::size_t n = model.size();
  GammaMatrix gamma = GammaMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!model.coupled(a, b)) continue;
      const double g = model.coupling(a, b);
      const double value = g * g / (model.slope(a) - model.slope(b));
      gamma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = value;
      gamma(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = -value;
    }
  }
  return gamma;
}

double shoelace_area(const std::vector<Point>& vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Point& p = vertices[k];
    const Point& q = vertices[(k + 1) % n];
    twice += p.t * q.energy - q.t * p.energy;
  }
  return 0.5 * twice;
}

namespace {

// Adjacency lists in increasing level order so traversal is deterministic.
std::vector<std::vector<std::size_t>> coupling_graph(const MLZModel& model) {
  std::vector<std::vector<std::size_t>> adj(model.size());
  for (std::size_t a = 0; a < model.size(); ++a)
    for (std::size_t b = 0; b < model.size(); ++b)
      if (model.coupled(a, b)) adj[a].push_back(b);
  return adj;
}

std::vector<std::vector<std::size_t>> fundamental_cycles(const MLZModel& model) {
  const std::size_t n = model.size();
  const auto adj = coupling_graph(model);
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, none), depth(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::vector<bool>> tree_edge(n, std::vector<bool>(n, false));

  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::queue<std::size_t> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t w : adj[u]) {
        if (seen[w]) continue;
        seen[w] = true;
        parent[w] = u;
        depth[w] = depth[u] + 1;
        tree_edge[u][w] = tree_edge[w][u] = true;
        frontier.push(w);
      }
    }
  }

  std::vector<std::vector<std::size_t>> cycles;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t w : adj[u]) {
      if (w <= u || tree_edge[u][w]) continue;
      // Walk both ends up to their lowest common ancestor.
      std::vector<std::size_t> up{u}, down{w};
      std::size_t x = u, y = w;
      while (depth[x] > depth[y]) up.push_back(x = parent[x]);
      while (depth[y] > depth[x]) down.push_back(y = parent[y]);
      while (x != y) {
        up.push_back(x = parent[x]);
        down.push_back(y = parent[y]);
      }
      down.pop_back();  // the ancestor is already the last entry of `up`
      std::vector<std::size_t> cycle = up;
      cycle.insert(cycle.end(), down.rbegin(), down.rend());
      cycles.push_back(std::move(cycle));
    }
  }
  return cycles;
}

double link_phase(const MLZModel& model, std::size_t from, std::size_t to) {
  const double db = model.slope(to) - model.slope(from);
  if (db == 0.0)
    throw DegeneracyError("levels " + std::to_string(from + 1) + " and " + std::to_string(to + 1) +
                          " are parallel");
  const double de = model.offset(to) - model.offset(from);
  return de * de / (2.0 * db);
}

}  // namespace

std::vector<LoopArea> check_ic1(const MLZModel& model) {
  std::vector<LoopArea> loops;
  for (auto& cycle : fundamental_cycles(model)) {
    LoopArea loop;
    std::vector<Point> polygon;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const std::size_t a = cycle[k];
      const std::size_t b = cycle[(k + 1) % cycle.size()];
      const double t = model.crossing_time(a, b);
      polygon.push_back({t, model.diabatic_energy(a, t)});
      loop.scale = std::max(loop.scale, std::abs(link_phase(model, a, b)));
    }
    loop.area = shoelace_area(polygon);
    loop.cycle = std::move(cycle);
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::vector<PairResidual> check_ic2_perturbative(const MLZModel& model) {
  const std::size_t n = model.size();
  double energy_scale = 0.0;
  for (std::size_t a = 0; a < n; ++a) energy_scale = std::max(energy_scale, std::abs(model.offset(a)));

  std::vector<PairResidual> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (model.coupled(a, b) || model.slope(a) == model.slope(b)) continue;
      PairResidual r;
      r.a = a;
      r.b = b;
      r.time = model.crossing_time(a, b);
      const double ea = model.diabatic_energy(a, r.time);
      const double tolerance = 1e-12 * std::max(1.0, std::max(energy_scale, std::abs(ea)));
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        const bool to_a = model.coupled(a, c);
        const bool to_b = model.coupled(b, c);
        if (!to_a && !to_b) continue;
        const double gap = ea - model.diabatic_energy(c, r.time);
        if (std::abs(gap) <= tolerance) {
          if (to_a && to_b)
            throw DegeneracyError("level " + std::to_string(c + 1) + " is degenerate with the crossing of " +
                                  std::to_string(a + 1) + " and " + std::to_string(b + 1));
          r.coincident = true;
          continue;
        }
        if (!(to_a && to_b)) continue;
        const double term = model.coupling(a, c) * model.coupling(c, b) / gap;
        r.sum += term;
        r.scale = std::max(r.scale, std::abs(term));
      }
      r.residual = r.scale == 0.0 ? 0.0 : std::abs(r.sum) / r.scale;
      out.push_back(r);
    }
  }
  return out;
}

ICReport check_integrability(const MLZModel& model, const ICTolerances& tol) {
  ICReport report;
  report.gamma = gamma_matrix(model);
  report.loop_areas = check_ic1(model);
  try {
    report.perturbative_residuals = check_ic2_perturbative(model);
  } catch (const DegeneracyError&) {
    // Second order is singular here, so the condition cannot be confirmed.
    report.ic2_pass = false;
    report.coincident_crossings = true;
  }
  for (const auto& loop : report.loop_areas)
    if (!(std::abs(loop.area) <= tol.area * loop.scale)) report.ic1_pass = false;
  for (const auto& r : report.perturbative_residuals) {
    if (!(r.residual <= tol.perturbative)) report.ic2_pass = false;
    if (r.coincident) report.coincident_crossings = true;
  }
  report.zero_offsets = model.offsets().cwiseAbs().maxCoeff() == 0.0;
  return report;
}

MTLZReport check_mtlz(const MTLZFamily& family, double tolerance) {
  validate(family);
  MTLZReport r;
  const std::size_t m = family.times();
  const std::size_t n = family.size();

  double entry = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    entry = std::max(entry, family.A[k].cwiseAbs().maxCoeff());
    for (std::size_t j = 0; j < m; ++j) entry = std::max(entry, family.B[k][j].cwiseAbs().maxCoeff());
  }
  r.scale = entry * entry;

  auto comm = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) { return (x * y - y * x).norm(); };
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      r.b_symmetry = std::max(r.b_symmetry, (family.B[k][j] - family.B[j][k]).norm());
      r.a_commutator = std::max(r.a_commutator, comm(family.A[j], family.A[k]));
      for (std::size_t l = 0; l < m; ++l)
        for (std::size_t s = 0; s < m; ++s)
          r.b_commutator = std::max(r.b_commutator, comm(family.B[j][k], family.B[l][s]));
      for (std::size_t s = 0; s < m; ++s) {
        const Eigen::MatrixXd lhs = family.B[s][j] * family.A[k] - family.A[k] * family.B[s][j];
        const Eigen::MatrixXd rhs = family.B[s][k] * family.A[j] - family.A[j] * family.B[s][k];
        r.mixed_commutator = std::max(r.mixed_commutator, (lhs - rhs).norm());
      }
    }
  }

  // For each coupled pair, fit one gamma^ab to all (k, j) and report the misfit.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      bool coupled = false;
      for (std::size_t k = 0; k < m; ++k) coupled = coupled || family.A[k](ia, ib) != 0.0;
      if (!coupled) continue;
      double dd = 0.0, dr = 0.0, rmax = 0.0;
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) {
          const double d = family.lambda(a, k, j) - family.lambda(b, k, j);
          const double rhs = family.A[k](ia, ib) * family.A[j](ia, ib);
          dd += d * d;
          dr += d * rhs;
          rmax = std::max(rmax, std::abs(rhs));
        }
      if (dd == 0.0) {
        r.gamma_relation = std::numeric_limits<double>::infinity();
        continue;
      }
      const double gamma = dr / dd;
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) {
          const double d = family.lambda(a, k, j) - family.lambda(b, k, j);
          const double rhs = family.A[k](ia, ib) * family.A[j](ia, ib);
          r.gamma_relation = std::max(r.gamma_relation, std::abs(gamma * d - rhs) / rmax);
        }
    }
  }

  const double limit = tolerance * r.scale;
  r.passed = r.b_symmetry <= tolerance * entry && r.b_commutator <= limit && r.mixed_commutator <= limit &&
             r.a_commutator <= limit && r.gamma_relation <= tolerance;
  return r;
}

double dynamical_phase(const MLZModel& model, std::size_t a, std::size_t c, const std::vector<std::size_t>& chain) {
  std::vector<std::size_t> levels{c};
  levels.insert(levels.end(), chain.begin(), chain.end());
  levels.push_back(a);
  double phase = 0.0;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const std::size_t from = levels[k];
    const std::size_t to = levels[k + 1];
    if (!model.coupled(from, to))
      throw ModelError("dynamical_phase: levels " + std::to_string(from + 1) + " and " + std::to_string(to + 1) +
                       " are not coupled");
    phase += link_phase(model, from, to);
  }
  return phase;
}

namespace {

// Lanczos approximation (g = 7, 9 terms), valid for Re z >= 1/2.
std::complex<double> log_gamma_right(std::complex<double> z) {
  static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                           771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                           -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  std::complex<double> x = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) x += c[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

std::pair<double, double> stokes_phase(double gamma_ab) {
  if (gamma_ab == 0.0) return {0.0, 0.0};
  const std::complex<double> z(0.0, -std::abs(gamma_ab));
  // Gamma(z) = Gamma(z + 1) / z keeps the Lanczos sum in its accurate half-plane.
  const double log_arg = (log_gamma_right(z + 1.0) - std::log(z)).imag();
  const double arg = std::remainder(log_arg, 2.0 * std::numbers::pi);
  const double phi = (gamma_ab > 0 ? 1.0 : -1.0) * (std::numbers::pi / 4.0 - arg);
  return {phi, -phi};
}

}  // namespace mlz
