#include "mlz/propagator.hpp"

#include "mlz/error.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace mlz {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void validate(const PropagationConfig& config, std::size_t levels) {
  if (!std::isfinite(config.t_start) || !std::isfinite(config.t_end) || !(config.t_start < config.t_end))
    throw ModelError("propagation: t_start must be below t_end");
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ModelError("propagation: dt must be positive");
  if (config.initial_state) {
    if (static_cast<std::size_t>(config.initial_state->size()) != levels)
      throw ModelError("propagation: initial state has the wrong dimension");
    if (std::abs(config.initial_state->norm() - 1.0) > 1e-12)
      throw ModelError("propagation: initial state must be normalized");
  } else if (config.initial_level >= levels) {
    throw ModelError("propagation: initial level out of range");
  }
}

namespace {

// exp(-i K) for Hermitian K.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& k, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& solver) {
  solver.compute(k);
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  Eigen::VectorXcd phases(v.cols());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(-I * solver.eigenvalues()(i));
  return v * phases.asDiagonal() * v.adjoint();
}

std::size_t step_count(const PropagationConfig& config) {
  const double span = config.t_end - config.t_start;
  return static_cast<std::size_t>(std::max(1.0, std::round(span / config.dt)));
}

// Evolves the columns of `state` with the plain Magnus step. For H linear in
// t the fourth-order step is exp(-i (h H(t_m) - i h^3/12 [B, A])).
void run_plain(const MLZModel& model, const PropagationConfig& config, Eigen::MatrixXcd& state) {
  const auto n = static_cast<Eigen::Index>(model.size());
  const std::size_t steps = step_count(config);
  const double h = (config.t_end - config.t_start) / static_cast<double>(steps);
  Eigen::MatrixXd comm(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      comm(a, b) = (model.slopes()(a) - model.slopes()(b)) * model.couplings()(a, b);
  const Eigen::MatrixXcd correction = (-I * (h * h * h / 12.0)) * comm.cast<cd>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(n);
  Eigen::MatrixXcd k(n, n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double tm = config.t_start + (static_cast<double>(s) + 0.5) * h;
    k = (h * hamiltonian_at(model, tm)).cast<cd>() + correction;
    state = expm_hermitian(k, solver) * state;
  }
}

// phi_1(i c) = (e^{ic} - 1) / (ic), written to stay accurate as c -> 0.
cd phi1(double c) {
  if (c == 0.0) return 1.0;
  const double half = 0.5 * c;
  const double sinc_half = std::sin(half) / half;
  return {std::sin(c) / c, std::sin(half) * sinc_half};
}

// M_n(a) = int_0^1 x^n e^{iax} dx.
cd moment(int n, double a) {
  if (std::abs(a) <= 10.0) {
    cd sum = 0.0, term = 1.0;  // term = (ia)^m / m!
    for (int m = 0; m < 80; ++m) {
      const cd add = term / static_cast<double>(n + m + 1);
      sum += add;
      if (m > 4 && std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= I * a / static_cast<double>(m + 1);
    }
    return sum;
  }
  const cd e = std::exp(I * a);
  cd m = (e - 1.0) / (I * a);
  for (int k = 1; k <= n; ++k) m = (e - static_cast<double>(k) * m) / (I * a);
  return m;
}

// F(a, b) = int_0^1 dx1 int_0^x1 dx2 exp(i (a x1 + b x2)).
cd ordered_integral(double a, double b) {
  if (std::abs(b) >= 0.1) return (phi1(a + b) - phi1(a)) / (I * b);
  cd sum = 0.0, term = 1.0;  // term = (ib)^k / (k+1)!
  for (int k = 0; k < 30; ++k) {
    term /= static_cast<double>(k + 1);
    const cd add = term * moment(k + 1, a);
    sum += add;
    if (std::abs(add) < 1e-18) break;
    term *= I * b;
  }
  return sum;
}

// int_{-L}^{L} u^2 cos(w u) du.
double second_moment_cos(double w, double L) {
  const double x = w * L;
  if (std::abs(x) < 0.5) {
    double sum = 0.0, term = 1.0;  // (-1)^k x^{2k} / (2k)!
    for (int k = 0; k < 12; ++k) {
      sum += term / static_cast<double>(2 * k + 3);
      term *= -x * x / static_cast<double>((2 * k + 1) * (2 * k + 2));
    }
    return 2.0 * L * L * L * sum;
  }
  const double s = std::sin(x), c = std::cos(x);
  return 2.0 * (L * L * s / w + 2.0 * L * c / (w * w) - 2.0 * s / (w * w * w));
}

struct Triple {
  Eigen::Index a, c, b;
  double weight;  // A_ac A_cb
};

// Evolves interaction-picture amplitudes c_a = exp(i Phi_a) psi_a with
// Phi_a = beta_a t^2/2 + e_a t.
void run_interaction(const MLZModel& model, const PropagationConfig& config, Eigen::MatrixXcd& state) {
  const auto n = static_cast<Eigen::Index>(model.size());
  const std::size_t steps = step_count(config);
  const double h = (config.t_end - config.t_start) / static_cast<double>(steps);
  const Eigen::VectorXd& beta = model.slopes();
  const Eigen::VectorXd& e = model.offsets();
  const Eigen::MatrixXd& A = model.couplings();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b)
      if (A(a, b) != 0.0) pairs.emplace_back(a, b);
  std::vector<Triple> triples;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c)
        if (A(a, c) != 0.0 && A(c, b) != 0.0) triples.push_back({a, c, b, A(a, c) * A(c, b)});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(n);
  Eigen::MatrixXcd omega(n, n), k(n, n);
  const double half = 0.5 * h;
  for (std::size_t s = 0; s < steps; ++s) {
    const double tm = config.t_start + (static_cast<double>(s) + 0.5) * h;
    auto theta = [&](Eigen::Index a, Eigen::Index b) {
      return 0.5 * (beta(a) - beta(b)) * tm * tm + (e(a) - e(b)) * tm;
    };
    auto freq = [&](Eigen::Index a, Eigen::Index b) { return (beta(a) - beta(b)) * tm + (e(a) - e(b)); };
    auto ordered = [&](double x, double y) {
      return std::exp(-I * (0.5 * (x + y) * h)) * (h * h) * ordered_integral(x * h, y * h);
    };

    omega.setZero();
    for (const auto& [a, b] : pairs) {
      const double w = freq(a, b);
      const double delta = beta(a) - beta(b);
      const double x = w * half;
      const double j0 = x == 0.0 ? h : h * std::sin(x) / x;
      const double j2 = second_moment_cos(w, half);
      const cd value = -I * A(a, b) * std::exp(I * theta(a, b)) * (j0 + I * (0.5 * delta) * j2);
      omega(a, b) = value;
      omega(b, a) = -std::conj(value);
    }
    for (const Triple& t : triples) {
      const double w1 = freq(t.a, t.c), w2 = freq(t.c, t.b);
      const cd value = -0.5 * std::exp(I * theta(t.a, t.b)) * t.weight * (ordered(w1, w2) - ordered(w2, w1));
      omega(t.a, t.b) += value;
      if (t.a != t.b) omega(t.b, t.a) -= std::conj(value);
    }
    // Enforce exact anti-Hermiticity before exponentiating.
    k = 0.5 * I * (omega - omega.adjoint());
    state = expm_hermitian(k, solver) * state;
  }
}

void run(const MLZModel& model, const PropagationConfig& config, Eigen::MatrixXcd& state) {
  if (config.method == PropagationMethod::plain)
    run_plain(model, config, state);
  else
    run_interaction(model, config, state);
}

void check_norms(const Eigen::MatrixXcd& state, double tolerance) {
  for (Eigen::Index j = 0; j < state.cols(); ++j) {
    const double drift = std::abs(state.col(j).norm() - 1.0);
    if (drift > tolerance) {
      std::ostringstream msg;
      msg << "propagation: norm drift " << drift << " exceeds " << tolerance << "; reduce dt";
      throw NumericalError(msg.str());
    }
  }
}

}  // namespace

Eigen::VectorXcd propagate(const MLZModel& model, const PropagationConfig& config) {
  validate(config, model.size());
  const auto n = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXcd state(n, 1);
  if (config.initial_state)
    state.col(0) = *config.initial_state;
  else
    state.col(0) = Eigen::VectorXcd::Unit(n, static_cast<Eigen::Index>(config.initial_level));

  if (config.method == PropagationMethod::interaction) {
    for (Eigen::Index a = 0; a < n; ++a) {
      const double t = config.t_start;
      state(a, 0) *= std::exp(I * (0.5 * model.slopes()(a) * t * t + model.offsets()(a) * t));
    }
  }
  run(model, config, state);
  check_norms(state, config.norm_tolerance);
  if (config.method == PropagationMethod::interaction) {
    for (Eigen::Index a = 0; a < n; ++a) {
      const double t = config.t_end;
      state(a, 0) *= std::exp(-I * (0.5 * model.slopes()(a) * t * t + model.offsets()(a) * t));
    }
  }
  return state.col(0);
}

Eigen::MatrixXcd propagate_basis(const MLZModel& model, const PropagationConfig& config) {
  PropagationConfig basis = config;
  basis.initial_state.reset();
  basis.initial_level = 0;
  validate(basis, model.size());
  const auto n = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXcd state = Eigen::MatrixXcd::Identity(n, n);
  run(model, basis, state);
  check_norms(state, config.norm_tolerance);
  return state;
}

TransitionMatrix numeric_transition_matrix(const MLZModel& model, const PropagationConfig& config) {
  return propagate_basis(model, config).cwiseAbs2();
}

}  // namespace mlz
