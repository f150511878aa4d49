#pragma once
#include <stdexcept>
#include <string>

namespace vhom {

/// Argument outside the documented domain of a numerical routine.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Normalisation window too small to hold the beam's main lobe.
struct WindowError : DomainError {
  using DomainError::DomainError;
};

/// An integrand produced a non-finite sample.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation called on a configuration it does not support.
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Mismatched arguments (e.g. images from different sensor grids).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Invalid simulation configuration. `path` names the offending key.
struct ConfigError : std::runtime_error {
  ConfigError(std::string path, const std::string &what)
      : std::runtime_error(path + ": " + what), path(std::move(path)) {}
  std::string path;
};

/// Malformed input file or failed file I/O.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace vhom
