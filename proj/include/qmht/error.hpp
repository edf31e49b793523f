// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qmht {

/// Failure categories. The numeric values double as CLI exit codes where the
/// command line defines one.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kParse = 2,
  kLimitExceeded = 3,
  kNumerical = 4,
  kDimensionMismatch = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qmht
