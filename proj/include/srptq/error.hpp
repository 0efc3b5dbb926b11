#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srptq {

enum class ErrorCode {
  InvalidArgument,
  NotOverloaded,
  NoBracket,
  DegenerateTail,
  QuantileUndefined,
  GridTooCoarse,
  NonpositiveHorizon,
  UnknownDiscipline,
  CouplingViolation,
  InsufficientData,
  ConfigParse,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this type; `code()` lets callers branch
// without matching on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace srptq
