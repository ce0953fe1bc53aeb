#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bridgenav {

enum class ErrorCode {
  DegenerateInput,
  InvalidSpec,
  InvalidArgument,
  TooFewPoints,
  SingularCovariance,
  UndefinedRatio,
  UnknownVertex,
  MissingVertex,
  Disconnected,
  NotEulerian,
  BudgetExceeded,
  BudgetExhausted,
  InvalidEndpoint,
  MissingLayer,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Error raised by a named pipeline stage; wraps the original code.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), "[" + stage + "] " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace bridgenav
