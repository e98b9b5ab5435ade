#pragma once

#include <stdexcept>
#include <string>

namespace acbc {

enum class ErrorCode {
  kFileNotFound,
  kNonNumericCell,
  kInsufficientRows,
  kNoCovariates,
  kRaggedRow,
  kColumnOutOfRange,
  kNonFinite,
  kDimensionMismatch,
  kInvalidArgument,
  kBasisTooLarge,
  kFactorizationFailed,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for failures caused by bad input rather than a numerical breakdown.
  bool is_input_error() const noexcept {
    return code_ != ErrorCode::kFactorizationFailed;
  }

 private:
  ErrorCode code_;
};

}  // namespace acbc
