// config.hpp - JSON run configuration for the command-line tool.
//
// Every real may be given as a JSON number or as a decimal string. Level
// indices in the file are 1-based. Unknown keys are rejected.

#pragma once

#include "mlz/closed_form.hpp"
#include "mlz/family.hpp"
#include "mlz/model_spec.hpp"
#include "mlz/propagator.hpp"
#include "mlz/spectra.hpp"
#include "mlz/sweep.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mlz::cli {

inline constexpr int kSchemaVersion = 1;

/// Closed-form oracle request: a five-state phase, or the six- or ten-state rows.
struct ClosedFormRequest {
  int states = 5;
  FiveStatePhase phase = FiveStatePhase::one;
  std::vector<double> p;  // p_3, p_4, ... as the model needs
};

struct RunConfig {
  std::optional<ModelSpec> model;               // empty for closed_form requests
  std::optional<ClosedFormRequest> closed_form;
  std::optional<Contour> contour;               // pullback contour for bowtie models
  PropagationConfig propagation;
  std::vector<SweepAxis> axes;
  CrossingOptions spectrum;
  std::optional<double> agreement_tolerance;    // numeric vs semiclassical, max entry
  std::uint64_t seed = 1;
  std::string method;                           // empty: verb default
  unsigned threads = 1;
  std::vector<std::size_t> rows_of_interest;    // 0-based
};

/// Throws ConfigError on any schema violation.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Configuration equivalent to a named built-in recipe.
RunConfig recipe_config(const std::string& name, std::uint64_t seed);

/// Raw-model JSON in the input schema, so generated models can be fed back in.
nlohmann::json model_to_json(const MLZModel& model);

PropagationMethod parse_propagation_method(const std::string& name);

}  // namespace mlz::cli
