#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracp {

enum class ErrorCode {
  EmptyDomain,
  DimensionMismatch,
  InvalidParams,
  TruncationTooSmall,
  ZeroFunction,
  NotPositive,
  NotConverged,
  DegeneratePath,
  NoSignChange,
  WrongExponent,
  OverlappingBalls,
  EmptyZeroSet,
  ExponentOutOfRange,
  NegativeWeight,
  NegativeInput,
  SameSign,
  NotOnCircle,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fracp
