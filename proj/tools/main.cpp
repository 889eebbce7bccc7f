#include "commands.hpp"

#include "mlz/error.hpp"
#include "mlz/recipes.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>

namespace {

struct Options {
  std::string config;
  std::string recipe;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string method;
  unsigned threads = 0;
};

void add_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--recipe", o.recipe, "built-in configuration (see --list-recipes)");
  cmd->add_option("--seed", o.seed, "seed for recipes with random parameters");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--method", o.method, "method (probabilities: semiclassical|scattering|numeric|all; "
                                        "sweep: numeric|semiclassical|scattering)");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

mlz::cli::Invocation prepare(const Options& o) {
  using mlz::ConfigError;
  if (o.config.empty() == o.recipe.empty()) throw ConfigError("give exactly one of --config and --recipe");
  mlz::cli::Invocation inv;
  inv.config = o.config.empty() ? mlz::cli::recipe_config(o.recipe, o.seed) : mlz::cli::load_config(o.config);
  if (o.threads) inv.config.threads = o.threads;
  inv.method = o.method;
  inv.out_dir = o.out;
  std::error_code ec;
  std::filesystem::create_directories(inv.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + o.out + "': " + ec.message());
  return inv;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mlz::cli;
  CLI::App app{"Multistate Landau-Zener models: integrability checks, transition probabilities and spectra"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-recipes", list, "print the built-in recipes and exit");

  Options opts;
  std::function<int(const Invocation&)> run;
  const std::vector<std::tuple<std::string, std::string, int (*)(const Invocation&)>> verbs{
      {"validate", "check the integrability conditions", cmd_validate},
      {"probabilities", "transition probability matrices", cmd_probabilities},
      {"spectrum", "adiabatic energies and exact crossings", cmd_spectrum},
      {"sweep", "transition probabilities over a parameter grid", cmd_sweep},
      {"pullback", "restrict a bowtie family to its time contour", cmd_pullback},
      {"mtlz-check", "commutativity conditions of a bowtie family", cmd_mtlz_check},
  };
  for (const auto& [name, help, fn] : verbs) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_options(cmd, opts);
    cmd->callback([&run, fn = fn] { run = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kSuccess : kConfigError;
  }

  if (list) {
    for (const auto& name : mlz::recipe_names())
      std::cout << name << "  " << mlz::make_recipe(name).description << '\n';
    return kSuccess;
  }
  if (!run) {
    std::cerr << app.help();
    return kConfigError;
  }

  try {
    return run(prepare(opts));
  } catch (const mlz::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kConfigError;
  } catch (const mlz::NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << '\n';
    return kNumericalFailure;
  } catch (const mlz::Error& err) {
    std::cerr << "validation error: " << err.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kConfigError;
  }
}
