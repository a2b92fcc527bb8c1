#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace npdg {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kNotStabilizable,
  kMaxIterations,
  kDiverged,
  kBlockMismatch,
  kNotNormalized,
  kNonFinite,
  kGridInvalid,
  kGridMismatch,
  kPartitionInvalid,
  kParse,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Solver-side failures map to CLI exit code 2, everything else to 1.
  bool is_solver_failure() const noexcept {
    return kind_ == ErrorKind::kNotStabilizable || kind_ == ErrorKind::kMaxIterations ||
           kind_ == ErrorKind::kDiverged;
  }

 private:
  ErrorKind kind_;
};

}  // namespace npdg
