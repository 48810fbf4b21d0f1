#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thinset {

enum class ErrorCode {
  NonIntegerRadiusExponent,
  MonotonicityViolation,
  DepthTooLarge,
  LevelOutOfRange,
  TermCapExceeded,
  OutOfUnitInterval,
  RegimeViolation,
  ChainTooShallow,
  ConditionFailure,
  CapExceeded,
  PreconditionFailure,
  PrecisionExhausted,
  ExhaustedUniverse,
  ChoiceFailure,
  SearchSpaceTooLarge,
  DuplicateInput,
  GrowthPropertyMissing,
  UniverseExceeded,
  PartitionOverlap,
  InvalidArgument,
  InternalInvariant,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above; the
// message adds the offending level / value where one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace thinset
