#include "lsar/error.hpp"

namespace lsar {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonUniformReceivers: return "NonUniformReceivers";
    case ErrorCode::NonUniformScan: return "NonUniformScan";
    case ErrorCode::BadPermittivity: return "BadPermittivity";
    case ErrorCode::EmptyAxis: return "EmptyAxis";
    case ErrorCode::GridOutsideMedium: return "GridOutsideMedium";
    case ErrorCode::GridSpacingMismatch: return "GridSpacingMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SameSide: return "SameSide";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeThreshold: return "NegativeThreshold";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::SizingError: return "SizingError";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnsupportedElementType: return "UnsupportedElementType";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::PayloadSizeMismatch: return "PayloadSizeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
  }
  return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonUniformReceivers:
    case ErrorCode::NonUniformScan:
    case ErrorCode::BadPermittivity:
    case ErrorCode::EmptyAxis:
    case ErrorCode::GridOutsideMedium:
    case ErrorCode::GridSpacingMismatch:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidParameter:
    case ErrorCode::EmptyGrid:
    case ErrorCode::NegativeThreshold:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::DimensionMismatch:
      return ErrorCategory::Validation;
    case ErrorCode::IoFailure:
    case ErrorCode::UnsupportedElementType:
    case ErrorCode::BadMagic:
    case ErrorCode::VersionUnsupported:
    case ErrorCode::PayloadSizeMismatch:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Numerical;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace lsar
