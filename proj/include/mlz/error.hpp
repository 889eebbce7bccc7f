#pragma once

#include <stdexcept>
#include <string>

namespace mlz {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model or spec violates a structural constraint (bad slopes, closure, signs).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Two coupled levels share a slope, or a crossing is ambiguous in time.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure lost accuracy (norm drift, path-count guard).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlz
