#include "commands.hpp"

#include "output.hpp"

#include "mlz/closed_form.hpp"
#include "mlz/error.hpp"
#include "mlz/integrability.hpp"
#include "mlz/semiclassics.hpp"

#include <iostream>
#include <random>
#include <sstream>

namespace mlz::cli {

using nlohmann::json;

namespace {

json header(const std::string& command, const Invocation& inv) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  if (inv.config.model) doc["model_type"] = model_kind(*inv.config.model);
  return doc;
}

const ModelSpec& require_model(const Invocation& inv, const std::string& command) {
  if (!inv.config.model) throw ConfigError(command + " needs a buildable model; closed_form is only for probabilities");
  return *inv.config.model;
}

const BowtieSpec& require_bowtie(const Invocation& inv, const std::string& command) {
  const auto* spec = std::get_if<BowtieSpec>(&require_model(inv, command));
  if (!spec) throw ConfigError(command + " needs a bowtie model");
  return *spec;
}

std::string chosen_method(const Invocation& inv, const std::string& fallback) {
  if (!inv.method.empty()) return inv.method;
  if (!inv.config.method.empty()) return inv.config.method;
  return fallback;
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& levels) {
  std::vector<std::size_t> out;
  for (auto a : levels) out.push_back(a + 1);
  return out;
}

json residuals_json(const TwoBandResiduals& r) {
  return {{"slope_margin", real_json(r.slope_margin)},
          {"offset", real_json(r.offset)},
          {"closure", real_json(r.closure)},
          {"coupling_ratio", real_json(r.coupling_ratio)},
          {"sign_consistent", r.sign_consistent},
          {"zero_scale", r.zero_scale},
          {"max", real_json(r.max_residual())}};
}

json mtlz_json(const MTLZReport& r) {
  return {{"b_symmetry", r.b_symmetry},         {"b_commutator", r.b_commutator},
          {"mixed_commutator", r.mixed_commutator}, {"a_commutator", r.a_commutator},
          {"gamma_relation", r.gamma_relation}, {"scale", r.scale},
          {"pass", r.passed}};
}

double max_abs_diff(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) { return (x - y).cwiseAbs().maxCoeff(); }

double stochastic_defect(const Eigen::MatrixXd& p) {
  const double rows = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (p.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

int closed_form_probabilities(const Invocation& inv) {
  const ClosedFormRequest& req = *inv.config.closed_form;
  const auto& p = req.p;
  json doc = header("probabilities", inv);
  doc["model_type"] = "closed_form";
  doc["states"] = req.states;
  const auto path = inv.out_dir / "P_closed_form.csv";
  if (req.states == 5) {
    const TransitionMatrix m = closed_form_five_state(req.phase, p[0], p[1]);
    write_matrix_csv(path, m);
    doc["matrix"] = matrix_json(m);
  } else {
    // Only some rows are known in closed form; emit them as columns by initial level.
    std::vector<std::size_t> from;
    std::vector<Eigen::VectorXd> rows;
    if (req.states == 6) {
      const std::array<double, 4> q{p[0], p[1], p[2], p[3]};
      for (std::size_t f : {std::size_t{0}, std::size_t{2}}) {
        from.push_back(f);
        rows.push_back(closed_form_six_state_row(f, q));
      }
    } else {
      from.push_back(0);
      rows.push_back(closed_form_ten_state_row(p));
    }
    std::ostringstream csv;
    csv << "final";
    for (auto f : from) csv << ",from_" << f + 1;
    csv << '\n';
    for (Eigen::Index j = 0; j < rows.front().size(); ++j) {
      csv << j + 1;
      for (const auto& r : rows) csv << ',' << format_real(r(j));
      csv << '\n';
    }
    write_text(path, csv.str());
    json cols = json::object();
    for (std::size_t k = 0; k < from.size(); ++k) cols[std::to_string(from[k] + 1)] = to_vector(rows[k]);
    doc["from"] = cols;
  }
  write_json(inv.out_dir / "probabilities.json", doc);
  std::cout << "closed-form probabilities written to " << path.string() << '\n';
  return kSuccess;
}

}  // namespace

int cmd_validate(const Invocation& inv) {
  const ModelSpec& spec = require_model(inv, "validate");
  const MLZModel model = build_model(spec);
  const ICReport report = check_integrability(model);

  json doc = header("validate", inv);
  doc["levels"] = model.size();
  json loops = json::array();
  for (const auto& loop : report.loop_areas)
    loops.push_back({{"cycle", one_based(loop.cycle)}, {"area", loop.area}, {"scale", loop.scale}});
  doc["ic1"] = {{"pass", report.ic1_pass}, {"loops", loops}};
  json pairs = json::array();
  for (const auto& r : report.perturbative_residuals)
    pairs.push_back({{"a", r.a + 1},
                     {"b", r.b + 1},
                     {"time", r.time},
                     {"sum", r.sum},
                     {"scale", r.scale},
                     {"residual", r.residual},
                     {"coincident", r.coincident}});
  doc["ic2"] = {{"pass", report.ic2_pass}, {"pairs", pairs}};
  doc["gamma"] = matrix_json(report.gamma);
  doc["flags"] = {{"zero_offsets", report.zero_offsets}, {"coincident_crossings", report.coincident_crossings}};
  const std::string kind = model_kind(spec);
  if (kind == "two_band" || kind == "bowtie") doc["two_band_residuals"] = residuals_json(two_band_residuals(model));
  doc["pass"] = report.passed();
  write_json(inv.out_dir / "validate.json", doc);

  std::cout << "IC1 (zero loop areas): " << (report.ic1_pass ? "pass" : "FAIL") << " over " << loops.size()
            << " loops\n"
            << "IC2 (exact crossings, second order): " << (report.ic2_pass ? "pass" : "FAIL") << " over "
            << pairs.size() << " pairs\n";
  if (report.zero_offsets) std::cout << "note: all offsets vanish; every crossing happens at t = 0\n";
  if (report.coincident_crossings) std::cout << "note: coincident crossings were flagged\n";
  return report.passed() ? kSuccess : kValidationFailure;
}

int cmd_probabilities(const Invocation& inv) {
  if (inv.config.closed_form) return closed_form_probabilities(inv);
  const MLZModel model = build_model(require_model(inv, "probabilities"));
  const std::string method = chosen_method(inv, "all");
  if (method != "semiclassical" && method != "scattering" && method != "numeric" && method != "all")
    throw ConfigError("probabilities: unknown method '" + method + "' (semiclassical, scattering, numeric, all)");

  json doc = header("probabilities", inv);
  doc["levels"] = model.size();
  doc["method"] = method;
  const bool all = method == "all";
  std::optional<TransitionMatrix> semi, scatter, numeric;
  if (all || method == "semiclassical" || method == "scattering") {
    const DiabaticDiagram diagram = build_diagram(model);
    if (all || method == "semiclassical") semi = semiclassical_matrix(diagram);
    if (all || method == "scattering") scatter = scattering_product(diagram);
  }
  if (all || method == "numeric") numeric = numeric_transition_matrix(model, inv.config.propagation);

  for (const auto& [name, m] : {std::pair{"semiclassical", &semi}, {"scattering", &scatter}, {"numeric", &numeric}}) {
    if (!*m) continue;
    write_matrix_csv(inv.out_dir / (std::string("P_") + name + ".csv"), **m);
    doc["matrices"][name] = matrix_json(**m);
    doc["stochastic_defect"][name] = stochastic_defect(**m);
  }

  int code = kSuccess;
  if (all) {
    const double sc = max_abs_diff(*semi, *scatter);
    const double num = max_abs_diff(*numeric, *semi);
    doc["discrepancy"] = {{"scattering_vs_semiclassical", sc}, {"numeric_vs_semiclassical", num}};
    std::cout << "max |scattering - semiclassical| = " << format_real(sc) << '\n'
              << "max |numeric - semiclassical|    = " << format_real(num) << '\n';
    if (inv.config.agreement_tolerance) {
      const bool ok = num <= *inv.config.agreement_tolerance;
      doc["agreement"] = {{"tolerance", *inv.config.agreement_tolerance}, {"pass", ok}};
      if (!ok) code = kNumericalFailure;
    }
  }
  write_json(inv.out_dir / "probabilities.json", doc);
  return code;
}

int cmd_spectrum(const Invocation& inv) {
  const ModelSpec& spec = require_model(inv, "spectrum");
  const MLZModel model = build_model(spec);
  CrossingOptions options = inv.config.spectrum;
  options.threads = inv.config.threads;
  const CrossingScan scan = scan_gap_minima(model, options);

  const auto grid = linear_grid(scan.window.t_min, scan.window.t_max, options.grid_points);
  const SpectralTracks tracks = adiabatic_energies(model, grid, options.threads);
  std::ostringstream csv;
  csv << 't';
  for (std::size_t k = 0; k < model.size(); ++k) csv << ",E" << k + 1;
  csv << '\n';
  for (Eigen::Index i = 0; i < tracks.energies.rows(); ++i) {
    csv << format_real(tracks.times[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < tracks.energies.cols(); ++k) csv << ',' << format_real(tracks.energies(i, k));
    csv << '\n';
  }
  write_text(inv.out_dir / "tracks.csv", csv.str());

  json doc = header("spectrum", inv);
  doc["levels"] = model.size();
  doc["window"] = {{"t_min", scan.window.t_min}, {"t_max", scan.window.t_max}};
  doc["grid_points"] = options.grid_points;
  doc["exact_tolerance"] = options.exact_tolerance;
  doc["spectral_range"] = scan.spectral_range;
  json exact = json::array(), avoided = json::array();
  for (const auto& r : scan.minima) {
    json item = {{"levels", {r.lower + 1, r.lower + 2}}, {"time", r.time}, {"gap", r.gap}, {"ambiguous", r.ambiguous}};
    (r.exact ? exact : avoided).push_back(item);
  }
  doc["exact_crossings"] = exact;
  doc["avoided_minima"] = avoided;
  doc["exact_count"] = scan.exact_count();
  doc["smallest_avoided_gap"] = real_json(scan.smallest_avoided_gap());

  int code = kSuccess;
  const std::string kind = model_kind(spec);
  std::cout << "exact crossings: " << scan.exact_count();
  if (kind == "two_band" || kind == "bowtie") {
    const std::size_t expected = expected_crossing_count(model.size());
    doc["expected_count"] = expected;
    std::cout << " (expected " << expected << " for " << model.size() << " levels)";
    if (expected != scan.exact_count()) code = kNumericalFailure;
  } else {
    doc["expected_count"] = nullptr;
  }
  std::cout << '\n';
  write_json(inv.out_dir / "crossings.json", doc);
  return code;
}

int cmd_sweep(const Invocation& inv) {
  const ModelSpec& base = require_model(inv, "sweep");
  const auto& axes = inv.config.axes;
  if (axes.empty()) throw ConfigError("sweep needs at least one axis");
  const std::string method = chosen_method(inv, "numeric");
  MatrixFunction evaluate;
  if (method == "numeric") {
    const PropagationConfig prop = inv.config.propagation;
    evaluate = [prop](const MLZModel& m) { return numeric_transition_matrix(m, prop); };
  } else if (method == "semiclassical") {
    evaluate = [](const MLZModel& m) { return semiclassical_matrix(build_diagram(m)); };
  } else if (method == "scattering") {
    evaluate = [](const MLZModel& m) { return scattering_product(build_diagram(m)); };
  } else {
    throw ConfigError("sweep: unknown method '" + method + "' (numeric, semiclassical, scattering)");
  }
  // Reject bad parameter names before any work starts.
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.name + "' has no values");
    try {
      (void)with_parameter(base, axis.name, axis.values.front());
    } catch (const ModelError&) {
      // A bad value only fails its own rows.
    }
  }

  const std::size_t n = build_model(base).size();
  const auto rows = sweep(base, axes, evaluate, inv.config.threads);

  std::ostringstream csv;
  for (const auto& axis : axes) csv << csv_field(axis.name) << ',';
  csv << "ok";
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t b = 1; b <= n; ++b) csv << ",P_" << a << '_' << b;
  csv << ",error\n";
  std::size_t failed = 0;
  bool numerical = false;
  for (const auto& row : rows) {
    for (double v : row.point) csv << format_real(v) << ',';
    const bool ok = row.matrix && static_cast<std::size_t>(row.matrix->rows()) == n;
    csv << (ok ? 1 : 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        csv << ',';
        if (ok) csv << format_real((*row.matrix)(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      }
    csv << ',' << csv_field(row.error) << '\n';
    if (!ok) ++failed;
    numerical = numerical || row.numerical_failure;
  }
  write_text(inv.out_dir / "sweep.csv", csv.str());

  json doc = header("sweep", inv);
  doc["method"] = method;
  doc["levels"] = n;
  json jaxes = json::array();
  for (const auto& axis : axes) jaxes.push_back({{"name", axis.name}, {"values", axis.values}});
  doc["axes"] = jaxes;
  doc["rows"] = rows.size();
  doc["failed_rows"] = failed;
  doc["rows_of_interest"] = one_based(inv.config.rows_of_interest);
  write_json(inv.out_dir / "sweep.json", doc);
  std::cout << rows.size() << " sweep points, " << failed << " failed\n";
  if (numerical) return kNumericalFailure;
  return failed ? kValidationFailure : kSuccess;
}

int cmd_pullback(const Invocation& inv) {
  const BowtieSpec& spec = require_bowtie(inv, "pullback");
  const double kappa = bowtie_kappa(spec);
  const MTLZFamily family = build_bowtie_family(spec);
  const Contour contour = inv.config.contour ? *inv.config.contour : bowtie_contour(spec);
  const MLZModel model = pullback_contour(family, contour);

  json model_doc;
  model_doc["schema_version"] = kSchemaVersion;
  model_doc["model"] = model_to_json(model);
  write_json(inv.out_dir / "model.json", model_doc);

  json doc = header("pullback", inv);
  doc["kappa"] = kappa;
  doc["contour"] = {{"v", to_vector(contour.v)}, {"eps", to_vector(contour.eps)}};
  doc["mtlz"] = mtlz_json(check_mtlz(family));
  bool pass = false;
  try {
    const TwoBandResiduals r = two_band_residuals(model);
    doc["two_band_residuals"] = residuals_json(r);
    pass = r.sign_consistent && r.slope_margin > 0.0 && r.max_residual() < 1e-10;
  } catch (const ModelError& err) {
    doc["two_band_residuals"] = nullptr;
    doc["error"] = err.what();
  }
  doc["pass"] = pass;
  write_json(inv.out_dir / "pullback.json", doc);
  std::cout << "pulled-back model with " << model.size() << " levels: two-band constraints "
            << (pass ? "hold" : "VIOLATED") << '\n';
  return pass ? kSuccess : kValidationFailure;
}

int cmd_mtlz_check(const Invocation& inv) {
  const BowtieSpec& spec = require_bowtie(inv, "mtlz-check");
  const MTLZFamily family = build_bowtie_family(spec);
  const MTLZReport report = check_mtlz(family);

  // Commutators of H_0 and H_1 at random multi-times, as a direct check.
  std::mt19937_64 rng(inv.config.seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  json samples = json::array();
  for (int s = 0; s < 10; ++s) {
    const Eigen::Vector2d tau(u(rng), u(rng));
    const Eigen::MatrixXd h0 = family.hamiltonian(0, tau), h1 = family.hamiltonian(1, tau);
    const double norm = (h0 * h1 - h1 * h0).norm();
    worst = std::max(worst, norm);
    samples.push_back({{"tau", {tau(0), tau(1)}}, {"commutator_norm", norm}});
  }
  const bool pass = report.passed && worst < 1e-10;

  json doc = header("mtlz-check", inv);
  doc["kappa"] = bowtie_kappa(spec);
  doc["report"] = mtlz_json(report);
  doc["samples"] = samples;
  doc["max_commutator_norm"] = worst;
  doc["pass"] = pass;
  write_json(inv.out_dir / "mtlz.json", doc);
  std::cout << "family conditions: " << (report.passed ? "pass" : "FAIL")
            << "; max ||[H0, H1]|| at random times = " << format_real(worst) << '\n';
  return pass ? kSuccess : kValidationFailure;
}

}  // namespace mlz::cli
