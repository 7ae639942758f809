#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crux {

enum class ErrorCode {
  kInvalidArgument,
  kEmpty,
  kUnreachable,
  kStuck,
  kLimitExceeded,
  kDomain,
  kEmptySet,
  kEmptyCorpus,
  kLocked,
  kDtTooLarge,
  kNoValidStart,
  kParse,
};

std::string_view to_string(ErrorCode code);

// Engine failures that a caller is expected to branch on carry a code; the
// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace crux
