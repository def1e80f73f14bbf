#include "v3s/error.hpp"

namespace v3s {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InvalidFactor: return "InvalidFactor";
    case ErrorKind::InvalidCrop: return "InvalidCrop";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ClipTooShort: return "ClipTooShort";
    case ErrorKind::ExhaustedRetries: return "ExhaustedRetries";
    case ErrorKind::ObjectOutOfBounds: return "ObjectOutOfBounds";
    case ErrorKind::NoObject: return "NoObject";
    case ErrorKind::MultipleObjects: return "MultipleObjects";
    case ErrorKind::EmptyGallery: return "EmptyGallery";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::OutOfRangeSample: return "OutOfRangeSample";
    case ErrorKind::CatalogMismatch: return "CatalogMismatch";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularSystem:
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ZeroVector:
      return ErrorCategory::Numerical;
    case ErrorKind::BadConfig:
    case ErrorKind::InvalidArgument:
      return ErrorCategory::Usage;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace v3s
