#pragma once

#include <stdexcept>
#include <string>

namespace fsc {

enum class ErrorCode {
  InvalidParameters,
  NumericalFailure,
  DimensionTooLarge,
  NodeSetMismatch,
  DegenerateFunction,
  SingularCovariance,
  ChainUnavailable,
  NonfiniteDerivative,
  BasisCollapse,
  NonfiniteRhs,
  NonfiniteState,
  UnknownVariant,
  GridMismatch,
  NonfinitePath,
  ConfigError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

  // Index of a failing raw function, time step, etc. when known; -1 otherwise.
  long index = -1;

 private:
  ErrorCode code_;
};

// Configuration problems map to exit code 2, everything else numerical to 3.
inline bool is_config_error(ErrorCode c) {
  return c == ErrorCode::ConfigError || c == ErrorCode::InvalidParameters ||
         c == ErrorCode::UnknownVariant || c == ErrorCode::DimensionTooLarge;
}

}  // namespace fsc
