#include "acbc/error.hpp"

#include <cstdlib>
#include <string>
#include <thread>

#include "acbc/parallel.hpp"

namespace acbc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "file not found";
    case ErrorCode::kNonNumericCell: return "non-numeric cell";
    case ErrorCode::kInsufficientRows: return "insufficient rows";
    case ErrorCode::kNoCovariates: return "no covariate columns";
    case ErrorCode::kRaggedRow: return "ragged row";
    case ErrorCode::kColumnOutOfRange: return "column out of range";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kBasisTooLarge: return "basis too large";
    case ErrorCode::kFactorizationFailed: return "factorization failed";
  }
  return "unknown error";
}

unsigned default_threads() {
  if (const char* env = std::getenv("ACBC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace acbc
