#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace postsim {

enum class ErrorCode {
  NotNormalized,
  NotHermitian,
  DimensionMismatch,
  IndexOutOfRange,
  DimensionTooLarge,
  ZeroProbabilityBranch,
  DegenerateLocalObservable,
  InvalidOracle,
  InvalidMarkedSet,
  RankDeficient,
  FullRank,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure surfaces as this exception; code() lets callers
// branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace postsim
