// sweep.hpp - transition matrices over a cartesian grid of model parameters.

#pragma once

#include "mlz/model_spec.hpp"
#include "mlz/propagator.hpp"
#include "mlz/semiclassics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mlz {

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepRow {
  std::vector<double> point;              // one value per axis
  std::optional<TransitionMatrix> matrix;  // empty when the point failed
  std::string error;
  bool numerical_failure = false;          // the failure was a NumericalError
};

using MatrixFunction = std::function<TransitionMatrix(const MLZModel&)>;

/// Grid points in row-major order (first axis slowest). Every point is applied
/// to `base` afresh, the model is rebuilt, and `evaluate` runs on it. Failures
/// raised as mlz::Error become failed rows. An empty axis list or any empty
/// axis gives an empty table. Rows are independent and are distributed over
/// `threads` workers; output order does not depend on the thread count.
std::vector<SweepRow> sweep(const ModelSpec& base, const std::vector<SweepAxis>& axes,
                            const MatrixFunction& evaluate, unsigned threads = 1);

/// Convenience wrapper evaluating numeric_transition_matrix at each point.
std::vector<SweepRow> sweep(const ModelSpec& base, const std::vector<SweepAxis>& axes,
                            const PropagationConfig& config, unsigned threads = 1);

/// Runs `job(i)` for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace mlz
