// commands.hpp - the verbs of the command-line tool.

#pragma once

#include "config.hpp"

#include <filesystem>
#include <string>

namespace mlz::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

struct Invocation {
  RunConfig config;
  std::filesystem::path out_dir = ".";
  std::string method;  // from --method; overrides the config
};

int cmd_validate(const Invocation& inv);
int cmd_probabilities(const Invocation& inv);
int cmd_spectrum(const Invocation& inv);
int cmd_sweep(const Invocation& inv);
int cmd_pullback(const Invocation& inv);
int cmd_mtlz_check(const Invocation& inv);

}  // namespace mlz::cli
