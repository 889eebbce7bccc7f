#include "mlz/model_spec.hpp"

#include "mlz/error.hpp"

#include <cmath>
#include <type_traits>

namespace mlz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Parses "<prefix><i>" with 1-based level i >= 3 into a 0-based position in b_3..b_N.
bool indexed(const std::string& name, const std::string& prefix, std::size_t count, std::size_t& position) {
  if (name.rfind(prefix, 0) != 0) return false;
  const std::string digits = name.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return false;
  const unsigned long level = std::stoul(digits);
  if (level < 3 || level - 3 >= count) throw ConfigError("parameter " + name + " refers to a missing level");
  position = level - 3;
  return true;
}

[[noreturn]] void unknown(const std::string& kind, const std::string& name) {
  throw ConfigError("unknown sweep parameter '" + name + "' for model type " + kind);
}

}  // namespace

std::string model_kind(const ModelSpec& spec) {
  return std::visit(overloaded{[](const TwoBandSpec&) { return std::string("two_band"); },
                               [](const BowtieSpec&) { return std::string("bowtie"); },
                               [](const DTCMSpec&) { return std::string("dtcm"); },
                               [](const TwoByThreeSpec&) { return std::string("two_by_three"); },
                               [](const MLZModel&) { return std::string("raw"); }},
                    spec);
}

MLZModel build_model(const ModelSpec& spec) {
  return std::visit(overloaded{[](const TwoBandSpec& s) { return build_two_band(s); },
                               [](const BowtieSpec& s) {
                                 return pullback_contour(build_bowtie_family(s), bowtie_contour(s));
                               },
                               [](const DTCMSpec& s) { return build_dtcm(s); },
                               [](const TwoByThreeSpec& s) { return build_2x3(s); },
                               [](const MLZModel& m) { return m; }},
                    spec);
}

std::vector<std::string> sweep_parameters(const ModelSpec& spec) {
  return std::visit(
      overloaded{[](const TwoBandSpec& s) {
                   std::vector<std::string> names{"coupling_scale", "e", "b"};
                   for (std::size_t i = 0; i < s.slopes.size(); ++i) {
                     names.push_back("b_" + std::to_string(i + 3));
                     names.push_back("g1_" + std::to_string(i + 3));
                   }
                   return names;
                 },
                 [](const BowtieSpec&) { return std::vector<std::string>{"coupling_scale", "a", "e"}; },
                 [](const DTCMSpec&) { return std::vector<std::string>{"g", "gamma", "beta"}; },
                 [](const TwoByThreeSpec&) {
                   return std::vector<std::string>{"b1", "b2", "b3", "e2", "e3", "g1", "g2", "g3"};
                 },
                 [](const MLZModel&) { return std::vector<std::string>{"coupling_scale"}; }},
      spec);
}

ModelSpec with_parameter(const ModelSpec& spec, const std::string& name, double value) {
  const std::string kind = model_kind(spec);
  return std::visit(
      overloaded{
          [&](TwoBandSpec s) -> ModelSpec {
            std::size_t i = 0;
            if (name == "coupling_scale") {
              for (double& g : s.g1) g *= value;
            } else if (name == "e") {
              s.e = value;
            } else if (name == "b") {
              s.b = value;
            } else if (indexed(name, "g1_", s.slopes.size(), i)) {
              s.g1[i] = value;
            } else if (indexed(name, "b_", s.slopes.size(), i)) {
              const double ratio = (value - s.b) / (s.slopes[i] - s.b);
              if (!(ratio > 0.0))
                throw ModelError("cannot move b_" + std::to_string(i + 3) + " across b while holding g1^2/(b_i-b)");
              s.g1[i] *= std::sqrt(ratio);
              s.slopes[i] = value;
            } else {
              unknown(kind, name);
            }
            return s;
          },
          [&](BowtieSpec s) -> ModelSpec {
            if (name == "coupling_scale") {
              for (double& g : s.gamma) g *= value;
            } else if (name == "a") {
              s.a = value;
            } else if (name == "e") {
              s.e = value;
            } else {
              unknown(kind, name);
            }
            return s;
          },
          [&](DTCMSpec s) -> ModelSpec {
            if (name == "g")
              s.g = value;
            else if (name == "gamma")
              s.gamma_distort = value;
            else if (name == "beta")
              s.beta = value;
            else
              unknown(kind, name);
            return s;
          },
          [&](TwoByThreeSpec s) -> ModelSpec {
            double* field = name == "b1"   ? &s.b1
                            : name == "b2" ? &s.b2
                            : name == "b3" ? &s.b3
                            : name == "e2" ? &s.e2
                            : name == "e3" ? &s.e3
                            : name == "g1" ? &s.g1
                            : name == "g2" ? &s.g2
                            : name == "g3" ? &s.g3
                                           : nullptr;
            if (!field) unknown(kind, name);
            *field = value;
            return s;
          },
          [&](const MLZModel& m) -> ModelSpec {
            if (name != "coupling_scale") unknown(kind, name);
            return MLZModel(m.slopes(), m.offsets(), m.couplings() * value);
          }},
      spec);
}

}  // namespace mlz
