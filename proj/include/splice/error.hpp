#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace splice {

enum class ErrorCode {
  Parse,
  InvalidArgument,
  InvalidDiagram,
  UnknownVertex,
  EdgeNotInternal,
  NotALeaf,
  NotAnEndNode,
  GenerationExhausted,
  ShapeMismatch,
  HammViolation,
  TailViolation,
  ConditionViolation,
  NonIntegralMultiplicity,
  Inconsistent,
  NoTorusPoint,
  EliminationDegenerate,
  SolveFailed,
  NotRealizable,
  NonCoprimeFan,
  VerificationFailed,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; the code identifies the
// failure kind so callers (the CLI in particular) can map it to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace splice
