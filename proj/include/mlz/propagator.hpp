// propagator.hpp - fixed-step numerical integration of i dpsi/dt = (A + B t) psi.

#pragma once

#include "mlz/model.hpp"
#include "mlz/semiclassics.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace mlz {

enum class PropagationMethod {
  // Fourth-order Magnus step on H(t) itself.
  plain,
  // Diabatic phases beta t^2/2 + e t are removed analytically and the
  // oscillatory remainder is integrated by a fourth-order Magnus step whose
  // integrals are evaluated in closed form.
  interaction,
};

struct PropagationConfig {
  double t_start = -500.0;
  double t_end = 500.0;
  double dt = 0.005;
  PropagationMethod method = PropagationMethod::interaction;
  std::size_t initial_level = 0;                // used when initial_state is empty
  std::optional<Eigen::VectorXcd> initial_state;  // normalized to 1e-12
  double norm_tolerance = 1e-6;
};

/// Throws ModelError for an invalid configuration.
void validate(const PropagationConfig& config, std::size_t levels);

/// psi(t_end) in the diabatic basis. Throws NumericalError on norm drift.
Eigen::VectorXcd propagate(const MLZModel& model, const PropagationConfig& config);

/// Evolution operator over [t_start, t_end] up to diagonal phases, obtained by
/// propagating all basis states at once.
Eigen::MatrixXcd propagate_basis(const MLZModel& model, const PropagationConfig& config);

/// P(a, b) = |psi_a(t_end)|^2 for psi(t_start) = |b>.
TransitionMatrix numeric_transition_matrix(const MLZModel& model, const PropagationConfig& config);

}  // namespace mlz
