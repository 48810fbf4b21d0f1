#include "thinset/error.hpp"

namespace thinset {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIntegerRadiusExponent: return "NonIntegerRadiusExponent";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::TermCapExceeded: return "TermCapExceeded";
    case ErrorCode::OutOfUnitInterval: return "OutOfUnitInterval";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::ChainTooShallow: return "ChainTooShallow";
    case ErrorCode::ConditionFailure: return "ConditionFailure";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::PreconditionFailure: return "PreconditionFailure";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::ExhaustedUniverse: return "ExhaustedUniverse";
    case ErrorCode::ChoiceFailure: return "ChoiceFailure";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::DuplicateInput: return "DuplicateInput";
    case ErrorCode::GrowthPropertyMissing: return "GrowthPropertyMissing";
    case ErrorCode::UniverseExceeded: return "UniverseExceeded";
    case ErrorCode::PartitionOverlap: return "PartitionOverlap";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InternalInvariant: return "InternalInvariant";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace thinset
