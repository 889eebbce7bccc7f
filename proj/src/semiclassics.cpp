#include "mlz/semiclassics.hpp"

#include "mlz/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mlz {

namespace {

bool same_time(double x, double y) {
  return std::abs(x - y) <= kTieTolerance * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

std::string pair_name(const Crossing& c) {
  return "(" + std::to_string(c.a + 1) + "," + std::to_string(c.b + 1) + ")";
}

}  // namespace

DiabaticDiagram build_diagram(const MLZModel& model) {
  DiabaticDiagram d;
  d.levels = model.size();
  for (std::size_t a = 0; a < model.size(); ++a) {
    for (std::size_t b = a + 1; b < model.size(); ++b) {
      if (!model.coupled(a, b)) continue;
      Crossing c;
      c.a = a;
      c.b = b;
      c.time = model.crossing_time(a, b);
      c.coupling = model.coupling(a, b);
      const LzPair pq = lz_pair(c.coupling, model.slope(a), model.slope(b));
      c.p = pq.p;
      c.q = pq.q;
      c.sign = c.coupling < 0 ? -1 : 1;
      d.crossings.push_back(c);
    }
  }
  std::sort(d.crossings.begin(), d.crossings.end(), [](const Crossing& x, const Crossing& y) {
    if (x.time != y.time) return x.time < y.time;
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  // Re-sort each near-tie cluster pair-lexicographically.
  std::size_t first = 0;
  while (first < d.crossings.size()) {
    std::size_t last = first + 1;
    while (last < d.crossings.size() && same_time(d.crossings[last - 1].time, d.crossings[last].time)) ++last;
    if (last - first > 1) {
      std::sort(d.crossings.begin() + static_cast<std::ptrdiff_t>(first),
                d.crossings.begin() + static_cast<std::ptrdiff_t>(last),
                [](const Crossing& x, const Crossing& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
      d.tie_groups.emplace_back(first, last);
    }
    first = last;
  }
  return d;
}

void require_unambiguous_order(const DiabaticDiagram& diagram) {
  for (const auto& [first, last] : diagram.tie_groups) {
    for (std::size_t i = first; i < last; ++i)
      for (std::size_t j = i + 1; j < last; ++j) {
        const Crossing& x = diagram.crossings[i];
        const Crossing& y = diagram.crossings[j];
        if (x.involves(y.a) || x.involves(y.b))
          throw DegeneracyError("simultaneous crossings " + pair_name(x) + " and " + pair_name(y) +
                                " share a level; their order is ambiguous");
      }
  }
}

namespace {

void check_level(const DiabaticDiagram& diagram, std::size_t level) {
  if (level >= diagram.levels) throw ModelError("level " + std::to_string(level + 1) + " is out of range");
}

// reach[k][l]: some trajectory occupying l just before crossing k ends on `to`.
std::vector<std::vector<char>> reachability(const DiabaticDiagram& diagram, std::size_t to) {
  const std::size_t k_max = diagram.crossings.size();
  std::vector<std::vector<char>> reach(k_max + 1, std::vector<char>(diagram.levels, 0));
  reach[k_max][to] = 1;
  for (std::size_t k = k_max; k-- > 0;) {
    const Crossing& c = diagram.crossings[k];
    for (std::size_t l = 0; l < diagram.levels; ++l) {
      reach[k][l] = reach[k + 1][l];
      if (c.involves(l) && c.q > 0.0) reach[k][l] = reach[k][l] || reach[k + 1][c.other(l)];
      if (c.involves(l) && c.p <= 0.0) reach[k][l] = reach[k + 1][c.other(l)];
    }
  }
  return reach;
}

}  // namespace

std::vector<Trajectory> enumerate_paths(const DiabaticDiagram& diagram, std::size_t from, std::size_t to,
                                        std::size_t cap) {
  check_level(diagram, from);
  check_level(diagram, to);
  require_unambiguous_order(diagram);
  const auto reach = reachability(diagram, to);
  std::vector<Trajectory> paths;
  if (!reach[0][from]) return paths;

  Trajectory current;
  current.from = from;
  current.to = to;
  current.levels.push_back(from);

  auto visit = [&](auto&& self, std::size_t k, std::size_t level) -> void {
    while (k < diagram.crossings.size() && !diagram.crossings[k].involves(level)) ++k;
    if (k == diagram.crossings.size()) {
      if (level == to) {
        if (paths.size() >= cap)
          throw NumericalError("enumerate_paths: more than " + std::to_string(cap) + " trajectories");
        paths.push_back(current);
      }
      return;
    }
    const Crossing& c = diagram.crossings[k];
    for (const bool sw : {false, true}) {
      const std::size_t next = sw ? c.other(level) : level;
      if ((sw ? c.q : c.p) <= 0.0 || !reach[k + 1][next]) continue;
      current.crossings.push_back(k);
      current.switched.push_back(sw);
      if (sw) current.levels.push_back(next);
      self(self, k + 1, next);
      if (sw) current.levels.pop_back();
      current.switched.pop_back();
      current.crossings.pop_back();
    }
  };
  visit(visit, 0, from);
  return paths;
}

std::complex<double> path_amplitude(const DiabaticDiagram& diagram, const Trajectory& path) {
  std::complex<double> amp = 1.0;
  for (std::size_t i = 0; i < path.crossings.size(); ++i) {
    const Crossing& c = diagram.crossings.at(path.crossings[i]);
    if (path.switched.at(i))
      amp *= std::complex<double>(0.0, c.sign * std::sqrt(c.q));
    else
      amp *= std::sqrt(c.p);
  }
  return amp;
}

TransitionMatrix semiclassical_matrix(const DiabaticDiagram& diagram) {
  require_unambiguous_order(diagram);
  const std::size_t n = diagram.levels;
  const std::size_t k_max = diagram.crossings.size();
  TransitionMatrix result(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  // memo[k][l]: summed amplitude of all trajectories that occupy l just before
  // crossing k and end on the target level.
  std::vector<std::vector<std::complex<double>>> memo(k_max + 1, std::vector<std::complex<double>>(n));
  for (std::size_t to = 0; to < n; ++to) {
    std::fill(memo[k_max].begin(), memo[k_max].end(), 0.0);
    memo[k_max][to] = 1.0;
    for (std::size_t k = k_max; k-- > 0;) {
      const Crossing& c = diagram.crossings[k];
      memo[k] = memo[k + 1];
      const std::complex<double> sw(0.0, c.sign * std::sqrt(c.q));
      const double stay = std::sqrt(c.p);
      memo[k][c.a] = stay * memo[k + 1][c.a] + sw * memo[k + 1][c.b];
      memo[k][c.b] = stay * memo[k + 1][c.b] + sw * memo[k + 1][c.a];
    }
    for (std::size_t from = 0; from < n; ++from)
      result(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) = std::norm(memo[0][from]);
  }
  return result;
}

Eigen::MatrixXcd scattering_amplitudes(const DiabaticDiagram& diagram) {
  require_unambiguous_order(diagram);
  const auto n = static_cast<Eigen::Index>(diagram.levels);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(n, n);
  for (const Crossing& c : diagram.crossings) {
    Eigen::MatrixXcd factor = Eigen::MatrixXcd::Identity(n, n);
    const auto a = static_cast<Eigen::Index>(c.a);
    const auto b = static_cast<Eigen::Index>(c.b);
    const std::complex<double> sw(0.0, c.sign * std::sqrt(c.q));
    factor(a, a) = factor(b, b) = std::sqrt(c.p);
    factor(a, b) = factor(b, a) = sw;
    s = factor * s;
  }
  return s;
}

TransitionMatrix scattering_product(const DiabaticDiagram& diagram) {
  return scattering_amplitudes(diagram).cwiseAbs2();
}

}  // namespace mlz
