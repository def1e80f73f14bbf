#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace v3s {

enum class ErrorKind {
  // numerical
  SingularSystem,
  DegenerateDenominator,
  DimensionMismatch,
  ZeroVector,
  // invalid parameters / data
  InvalidFactor,
  InvalidCrop,
  InvalidArgument,
  ClipTooShort,
  ExhaustedRetries,
  ObjectOutOfBounds,
  NoObject,
  MultipleObjects,
  EmptyGallery,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  OutOfRangeSample,
  CatalogMismatch,
  BadConfig,
  IoFailure,
};

enum class ErrorCategory { Usage = 1, Data = 2, Numerical = 3 };

std::string_view to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace v3s
