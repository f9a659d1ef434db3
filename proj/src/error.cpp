#include "fracp/error.hpp"

namespace fracp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::WrongExponent: return "WrongExponent";
    case ErrorCode::OverlappingBalls: return "OverlappingBalls";
    case ErrorCode::EmptyZeroSet: return "EmptyZeroSet";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::SameSign: return "SameSign";
    case ErrorCode::NotOnCircle: return "NotOnCircle";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fracp
