#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace osr {

enum class ErrorCode {
  // numerical
  kInsufficientData,
  kDegenerateData,
  kNoConvergence,
  kSingleClass,
  kZeroVariance,
  // validation
  kDimensionMismatch,
  kLengthMismatch,
  kInvalidArgument,
  kInvalidSplit,
  kUnknownLabel,
  kLabelOutOfRange,
  kNonFiniteValue,
  // I/O and file format
  kIo,
  kBadMagic,
  kUnsupportedVersion,
  kTruncatedFile,
};

std::string_view to_string(ErrorCode code);

/// Process exit code for a failure class: 1 I/O, 2 validation, 3 numerical.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace osr
