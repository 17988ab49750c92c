#include "osr/error.hpp"

namespace osr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidSplit: return "InvalidSplit";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInsufficientData:
    case ErrorCode::kDegenerateData:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kSingleClass:
    case ErrorCode::kZeroVariance:
      return 3;
    case ErrorCode::kIo:
    case ErrorCode::kBadMagic:
    case ErrorCode::kUnsupportedVersion:
    case ErrorCode::kTruncatedFile:
      return 1;
    default:
      return 2;
  }
}

}  // namespace osr
