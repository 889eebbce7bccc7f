#include "config.hpp"

#include "mlz/error.hpp"
#include "mlz/recipes.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace mlz::cli {

using nlohmann::json;

namespace {

// Object reader that remembers which keys were consumed.
class Fields {
 public:
  Fields(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& at(const std::string& key) {
    if (!obj_.contains(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
    seen_.insert(key);
    return obj_.at(key);
  }

  const json* find(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    seen_.insert(key);
    return &obj_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& item : obj_.items())
      if (!seen_.count(item.key())) throw ConfigError(where_ + ": unknown key '" + item.key() + "'");
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

double real(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(x)) throw ConfigError(where + ": '" + s + "' is not a real number");
    return x;
  }
  if (v.is_array() || v.is_object()) throw ConfigError(where + ": expected a real number (complex values are not supported)");
  throw ConfigError(where + ": expected a real number");
}

long long integer(const json& v, const std::string& where) {
  const double x = real(v, where);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError(where + ": expected an integer");
  return static_cast<long long>(x);
}

int sign(const json& v, const std::string& where) {
  const long long s = integer(v, where);
  if (s != 1 && s != -1) throw ConfigError(where + ": expected +1 or -1");
  return static_cast<int>(s);
}

std::vector<double> reals(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> signs(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(sign(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void read(Fields& f, const std::string& key, double& target) {
  if (const json* v = f.find(key)) target = real(*v, f.path(key));
}

TwoBandSpec parse_two_band(Fields& f) {
  TwoBandSpec spec;
  spec.b = real(f.at("b"), f.path("b"));
  spec.slopes = reals(f.at("slopes"), f.path("slopes"));
  spec.g1 = reals(f.at("g1"), f.path("g1"));
  spec.lambda = signs(f.at("lambda"), f.path("lambda"));
  read(f, "e", spec.e);
  if (const json* v = f.find("tau")) spec.tau = signs(*v, f.path("tau"));
  if (const json* v = f.find("rho")) spec.rho = sign(*v, f.path("rho"));
  if (const json* v = f.find("solve_closure")) {
    // 1-based level whose coupling is fixed by the closure; the given value keeps its sign.
    const long long level = integer(*v, f.path("solve_closure"));
    if (level < 3 || static_cast<std::size_t>(level - 3) >= spec.g1.size())
      throw ConfigError(f.path("solve_closure") + ": no such outer level");
    const auto pos = static_cast<std::size_t>(level - 3);
    spec.g1[pos] = std::copysign(solve_coupling_closure(spec, pos), spec.g1[pos]);
  }
  return spec;
}

BowtieSpec parse_bowtie(Fields& f) {
  BowtieSpec spec;
  spec.beta = reals(f.at("beta"), f.path("beta"));
  spec.gamma = reals(f.at("gamma"), f.path("gamma"));
  read(f, "a", spec.a);
  read(f, "e", spec.e);
  return spec;
}

DTCMSpec parse_dtcm(Fields& f) {
  DTCMSpec spec;
  spec.n_spins = static_cast<int>(integer(f.at("n_spins"), f.path("n_spins")));
  if (const json* v = f.find("n_bosons")) spec.n_bosons = static_cast<int>(integer(*v, f.path("n_bosons")));
  spec.epsilon = reals(f.at("epsilon"), f.path("epsilon"));
  read(f, "beta", spec.beta);
  read(f, "gamma", spec.gamma_distort);
  read(f, "g", spec.g);
  return spec;
}

TwoByThreeSpec parse_two_by_three(Fields& f) {
  TwoByThreeSpec spec;
  for (auto [key, target] : {std::pair<const char*, double*>{"b1", &spec.b1}, {"b2", &spec.b2}, {"b3", &spec.b3},
                             {"e2", &spec.e2}, {"e3", &spec.e3}, {"g1", &spec.g1}, {"g2", &spec.g2}, {"g3", &spec.g3}})
    read(f, key, *target);
  if (const json* v = f.find("branch")) spec.branch = sign(*v, f.path("branch"));
  return spec;
}

MLZModel parse_raw(Fields& f) {
  const auto slopes = reals(f.at("slopes"), f.path("slopes"));
  const auto offsets = reals(f.at("offsets"), f.path("offsets"));
  const auto n = static_cast<Eigen::Index>(slopes.size());
  if (offsets.size() != slopes.size()) throw ConfigError(f.path("offsets") + ": one offset per slope is required");
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  if (const json* list = f.find("couplings")) {
    const std::string where = f.path("couplings");
    if (!list->is_array()) throw ConfigError(where + ": expected an array of [a, b, g] triples");
    for (std::size_t k = 0; k < list->size(); ++k) {
      const json& item = (*list)[k];
      const std::string at = where + "[" + std::to_string(k) + "]";
      if (!item.is_array() || item.size() != 3) throw ConfigError(at + ": expected [a, b, g]");
      const long long a = integer(item[0], at), b = integer(item[1], at);
      if (a < 1 || b < 1 || a > n || b > n || a == b) throw ConfigError(at + ": level indices out of range");
      const double g = real(item[2], at);
      if (couplings(a - 1, b - 1) != 0.0) throw ConfigError(at + ": pair listed twice");
      couplings(a - 1, b - 1) = couplings(b - 1, a - 1) = g;
    }
  }
  return MLZModel(Eigen::Map<const Eigen::VectorXd>(slopes.data(), n),
                  Eigen::Map<const Eigen::VectorXd>(offsets.data(), n), couplings);
}

FiveStatePhase parse_phase(const std::string& name, const std::string& where) {
  if (name == "one") return FiveStatePhase::one;
  if (name == "two_a") return FiveStatePhase::two_a;
  if (name == "two_b") return FiveStatePhase::two_b;
  if (name == "three") return FiveStatePhase::three;
  throw ConfigError(where + ": unknown phase '" + name + "'");
}

ClosedFormRequest parse_closed_form(Fields& f) {
  ClosedFormRequest req;
  if (const json* v = f.find("states")) req.states = static_cast<int>(integer(*v, f.path("states")));
  req.p = reals(f.at("p"), f.path("p"));
  for (double p : req.p)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(f.path("p") + ": probabilities must lie in [0, 1]");
  std::size_t expected = 0;
  switch (req.states) {
    case 5: {
      expected = 2;
      const json* c = f.find("case");
      const json* ph = f.find("phase");
      if ((c != nullptr) == (ph != nullptr)) throw ConfigError("model: give exactly one of 'case' and 'phase'");
      if (c) {
        const long long k = integer(*c, f.path("case"));
        if (k < 1 || k > 8) throw ConfigError(f.path("case") + ": expected 1..8");
        req.phase = five_state_phase(static_cast<int>(k));
      } else {
        if (!ph->is_string()) throw ConfigError(f.path("phase") + ": expected a string");
        req.phase = parse_phase(ph->get<std::string>(), f.path("phase"));
      }
      break;
    }
    case 6: expected = 4; break;
    case 10: expected = 8; break;
    default: throw ConfigError(f.path("states") + ": closed forms exist for 5, 6 and 10 states");
  }
  if (req.p.size() != expected)
    throw ConfigError(f.path("p") + ": expected " + std::to_string(expected) + " stay probabilities");
  return req;
}

void parse_model(const json& doc, RunConfig& cfg) {
  Fields f(doc, "model");
  const json& type = f.at("type");
  if (!type.is_string()) throw ConfigError("model.type: expected a string");
  const std::string kind = type.get<std::string>();
  if (kind == "two_band") {
    cfg.model = parse_two_band(f);
  } else if (kind == "bowtie") {
    const BowtieSpec spec = parse_bowtie(f);
    cfg.model = spec;
    if (const json* v = f.find("contour")) {
      Fields c(*v, "model.contour");
      Contour contour;
      const auto vel = reals(c.at("v"), c.path("v"));
      const auto eps = reals(c.at("eps"), c.path("eps"));
      c.finish();
      if (vel.size() != 2 || eps.size() != 2) throw ConfigError("model.contour: v and eps need two entries");
      contour.v = Eigen::Vector2d(vel[0], vel[1]);
      contour.eps = Eigen::Vector2d(eps[0], eps[1]);
      cfg.contour = contour;
    }
  } else if (kind == "dtcm") {
    cfg.model = parse_dtcm(f);
  } else if (kind == "two_by_three") {
    cfg.model = parse_two_by_three(f);
  } else if (kind == "raw") {
    cfg.model = parse_raw(f);
  } else if (kind == "closed_form") {
    cfg.closed_form = parse_closed_form(f);
  } else {
    throw ConfigError("model.type: unknown model type '" + kind + "'");
  }
  f.finish();
}

void parse_propagation(const json& doc, PropagationConfig& p) {
  Fields f(doc, "propagation");
  read(f, "t_start", p.t_start);
  read(f, "t_end", p.t_end);
  read(f, "dt", p.dt);
  read(f, "norm_tolerance", p.norm_tolerance);
  if (const json* v = f.find("method")) {
    if (!v->is_string()) throw ConfigError("propagation.method: expected a string");
    p.method = parse_propagation_method(v->get<std::string>());
  }
  f.finish();
}

void parse_sweep(const json& doc, RunConfig& cfg) {
  Fields f(doc, "sweep");
  const json& axes = f.at("axes");
  if (!axes.is_array()) throw ConfigError("sweep.axes: expected an array");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    Fields a(axes[k], "sweep.axes[" + std::to_string(k) + "]");
    SweepAxis axis;
    const json& name = a.at("name");
    if (!name.is_string()) throw ConfigError(a.path("name") + ": expected a string");
    axis.name = name.get<std::string>();
    axis.values = reals(a.at("values"), a.path("values"));
    if (axis.values.empty()) throw ConfigError(a.path("values") + ": at least one value is required");
    a.finish();
    cfg.axes.push_back(std::move(axis));
  }
  if (const json* v = f.find("rows")) {
    if (!v->is_array()) throw ConfigError("sweep.rows: expected an array");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const long long level = integer((*v)[k], "sweep.rows");
      if (level < 1) throw ConfigError("sweep.rows: levels are 1-based");
      cfg.rows_of_interest.push_back(static_cast<std::size_t>(level - 1));
    }
  }
  f.finish();
}

void parse_spectrum(const json& doc, CrossingOptions& s) {
  Fields f(doc, "spectrum");
  const json* lo = f.find("t_min");
  const json* hi = f.find("t_max");
  if ((lo != nullptr) != (hi != nullptr)) throw ConfigError("spectrum: give both t_min and t_max or neither");
  if (lo) {
    Window w{real(*lo, "spectrum.t_min"), real(*hi, "spectrum.t_max")};
    if (!(w.t_min < w.t_max)) throw ConfigError("spectrum: t_min must be below t_max");
    s.window = w;
  }
  if (const json* v = f.find("grid_points")) {
    const long long points = integer(*v, "spectrum.grid_points");
    if (points < 3) throw ConfigError("spectrum.grid_points: at least 3 points are required");
    s.grid_points = static_cast<std::size_t>(points);
  }
  read(f, "exact_tolerance", s.exact_tolerance);
  f.finish();
}

}  // namespace

PropagationMethod parse_propagation_method(const std::string& name) {
  if (name == "plain") return PropagationMethod::plain;
  if (name == "interaction") return PropagationMethod::interaction;
  throw ConfigError("unknown propagation method '" + name + "' (expected plain or interaction)");
}

RunConfig parse_config(const json& doc) {
  Fields f(doc, "config");
  const json& version = f.at("schema_version");
  if (integer(version, "schema_version") != kSchemaVersion)
    throw ConfigError("schema_version: only version " + std::to_string(kSchemaVersion) + " is supported");
  RunConfig cfg;
  parse_model(f.at("model"), cfg);
  if (const json* v = f.find("propagation")) parse_propagation(*v, cfg.propagation);
  if (const json* v = f.find("sweep")) parse_sweep(*v, cfg);
  if (const json* v = f.find("spectrum")) parse_spectrum(*v, cfg.spectrum);
  if (const json* v = f.find("agreement_tolerance")) {
    cfg.agreement_tolerance = real(*v, "agreement_tolerance");
    if (!(*cfg.agreement_tolerance > 0.0)) throw ConfigError("agreement_tolerance: must be positive");
  }
  if (const json* v = f.find("seed")) {
    const long long seed = integer(*v, "seed");
    if (seed < 0) throw ConfigError("seed: must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (const json* v = f.find("method")) {
    if (!v->is_string()) throw ConfigError("method: expected a string");
    cfg.method = v->get<std::string>();
  }
  if (const json* v = f.find("threads")) {
    const long long t = integer(*v, "threads");
    if (t < 1) throw ConfigError("threads: must be at least 1");
    cfg.threads = static_cast<unsigned>(t);
  }
  f.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + err.what());
  }
  return parse_config(doc);
}

RunConfig recipe_config(const std::string& name, std::uint64_t seed) {
  const Recipe recipe = make_recipe(name, seed);
  RunConfig cfg;
  cfg.model = recipe.model;
  cfg.axes = recipe.axes;
  cfg.propagation = recipe.propagation;
  cfg.rows_of_interest = recipe.rows_of_interest;
  cfg.seed = seed;
  return cfg;
}

json model_to_json(const MLZModel& model) {
  json out;
  out["type"] = "raw";
  out["slopes"] = std::vector<double>(model.slopes().data(), model.slopes().data() + model.slopes().size());
  out["offsets"] = std::vector<double>(model.offsets().data(), model.offsets().data() + model.offsets().size());
  json couplings = json::array();
  for (std::size_t a = 0; a < model.size(); ++a)
    for (std::size_t b = a + 1; b < model.size(); ++b)
      if (model.coupled(a, b)) couplings.push_back({a + 1, b + 1, model.coupling(a, b)});
  out["couplings"] = couplings;
  return out;
}

}  // namespace mlz::cli
