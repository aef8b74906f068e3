#pragma once

#include <stdexcept>
#include <string>

namespace mmhb {

enum class ErrorKind {
  DimensionMismatch,
  InvalidRank,
  InvalidParams,
  NonFiniteState,
  ConvergenceFailure,
  AssumptionViolated,
  PreconditionViolated,
  EmptyTrajectory,
  ConfigError,
  UnknownExperiment,
  IOError
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mmhb
