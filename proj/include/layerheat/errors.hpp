#pragma once

#include <stdexcept>
#include <string>

namespace layerheat {

enum class ErrorCode {
  NonIncreasingBreakpoints,
  NonPositiveSigma,
  ZeroContactCoefficient,
  DegenerateBoundaryRow,
  LengthMismatch,
  WrongInterfaceKind,
  OverflowAtArgument,
  SingularNode,
  TooManyOverflowNodes,
  NonPositiveTime,
  OutOfDomain,
  TableHorizonTooSmall,
  UnsupportedSetup,
  NoSteadyState,
  SingularStep,
  GridMismatch,
  UnknownExample,
  ConfigParse,
};

const char* error_code_name(ErrorCode code);

/// Error type shared across the solver modules. The code identifies the
/// failure class; what() carries the diagnostic text.
class SolverError : public std::runtime_error {
public:
  SolverError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace layerheat
