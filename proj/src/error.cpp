#include "ffdd/error.hpp"

namespace ffdd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kUnknownChannel: return "UnknownChannel";
    case ErrorCode::kChannelMismatch: return "ChannelMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDegenerateFiber: return "DegenerateFiber";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kEmptyCrossSection: return "EmptyCrossSection";
    case ErrorCode::kStalledDescent: return "StalledDescent";
  }
  return "Unknown";
}

}  // namespace ffdd
