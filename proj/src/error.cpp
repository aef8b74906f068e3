#include "mmhb/error.hpp"

namespace mmhb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidRank: return "InvalidRank";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UnknownExperiment: return "UnknownExperiment";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace mmhb
