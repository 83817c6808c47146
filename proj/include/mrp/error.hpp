#pragma once

#include <stdexcept>
#include <string>

namespace mrp {

// Error categories map one-to-one onto the CLI exit codes:
// data/precondition problems exit with 3, numeric failures with 4.
enum class ErrorKind {
  InvalidInput,
  IncompletePath,
  OutOfHorizon,
  Parameter,
  NoDensity,
  RegularityViolation,
  NullSet,
  Injectivity,
  InsufficientMass,
  InsufficientData,
  Numeric,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::IncompletePath: return "incomplete-path";
    case ErrorKind::OutOfHorizon: return "out-of-horizon";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::NoDensity: return "no-density";
    case ErrorKind::RegularityViolation: return "regularity-violation";
    case ErrorKind::NullSet: return "null-set";
    case ErrorKind::Injectivity: return "injectivity";
    case ErrorKind::InsufficientMass: return "insufficient-mass";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Numeric: return "numeric";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mrp
