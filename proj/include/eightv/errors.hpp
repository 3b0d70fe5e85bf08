#pragma once

#include <stdexcept>
#include <string>

namespace eightv {

enum class ErrorKind {
  Usage,
  ConstraintViolated,
  Degenerate,
  SingularDenominator,
  Singular,
  Domain,
  RegimeUnsupported,
  SizeExceeded,
  DegenerateVariance,
  InvalidProfile,
  ZeroPartition,
  UnsupportedState,
  ImproperColoring,
  EigenFailure,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace eightv
