#ifndef LSAR_ERROR_HPP
#define LSAR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsar {

enum class ErrorCode {
  // configuration / validation
  NonUniformReceivers,
  NonUniformScan,
  BadPermittivity,
  EmptyAxis,
  GridOutsideMedium,
  GridSpacingMismatch,
  InvalidConfig,
  // numerics
  NonPositiveFrequency,
  NoConvergence,
  SameSide,
  DimensionMismatch,
  NegativeThreshold,
  InvalidParameter,
  EmptyGrid,
  EmptyImage,
  SizingError,
  // persistence
  IoFailure,
  UnsupportedElementType,
  BadMagic,
  VersionUnsupported,
  PayloadSizeMismatch,
  IndexOutOfRange,
};

std::string_view to_string(ErrorCode code) noexcept;

// Coarse grouping used by the CLI to choose an exit status.
enum class ErrorCategory { Validation, Numerical, Io };
ErrorCategory category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lsar

#endif  // LSAR_ERROR_HPP
