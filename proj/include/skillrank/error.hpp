#pragma once

#include <stdexcept>
#include <string>

namespace skillrank {

enum class ErrorCode {
  kEmptyTitle,
  kEmptyInput,
  kParse,
  kDimensionMismatch,
  kDuplicateId,
  kZeroVector,
  kMissingId,
  kMissingHeader,
  kUnsupportedVersion,
  kCorruptCheckpoint,
  kInvalidArgument,
  kIo,
};

const char* error_code_name(ErrorCode code);

// Every data error raised by the library carries a code so callers (the CLI,
// the service, tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace skillrank
