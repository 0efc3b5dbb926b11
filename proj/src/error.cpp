#include "srptq/error.hpp"

namespace srptq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NotOverloaded: return "not overloaded";
    case ErrorCode::NoBracket: return "no bracket";
    case ErrorCode::DegenerateTail: return "degenerate tail";
    case ErrorCode::QuantileUndefined: return "quantile undefined";
    case ErrorCode::GridTooCoarse: return "grid too coarse";
    case ErrorCode::NonpositiveHorizon: return "nonpositive horizon";
    case ErrorCode::UnknownDiscipline: return "unknown discipline";
    case ErrorCode::CouplingViolation: return "coupling violation";
    case ErrorCode::InsufficientData: return "insufficient data";
    case ErrorCode::ConfigParse: return "config parse error";
  }
  return "error";
}

}  // namespace srptq
