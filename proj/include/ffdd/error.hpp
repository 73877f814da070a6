#ifndef FFDD_ERROR_HPP
#define FFDD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ffdd {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kVersionMismatch,
  kCountMismatch,
  kValidation,
  kIo,
  kUnknownChannel,
  kChannelMismatch,
  kLengthMismatch,
  kOutOfRange,
  kDegenerateFiber,
  kRankDeficient,
  kEmptyCrossSection,
  kStalledDescent,
};

const char* to_string(ErrorCode code);

/// Base exception carrying a machine-readable code. The C API maps codes
/// one-to-one onto ffdd_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ffdd

#endif  // FFDD_ERROR_HPP
