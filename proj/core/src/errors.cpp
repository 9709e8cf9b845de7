#include "postsim/errors.hpp"

namespace postsim {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::DegenerateLocalObservable: return "DegenerateLocalObservable";
    case ErrorCode::InvalidOracle: return "InvalidOracle";
    case ErrorCode::InvalidMarkedSet: return "InvalidMarkedSet";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::FullRank: return "FullRank";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace postsim
