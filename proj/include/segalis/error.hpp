#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace segalis {

enum class ErrorCode {
  EmptyComplex,
  BadVertex,
  NotAGap,
  DimensionTooLarge,
  NoBoundary,
  ZeroDimension,
  TooManyVertices,
  NotFullDimensional,
  NotAdmissible,
  NotComposable,
  FlatCell,
  TooLarge,
  BadArity,
  FlipNotAvailable,
  NotADiagram,
  TruncationTooLow,
  NoPaths,
  NotPartialMonoid,
  NotAnExcision,
  NotSimplicial,
  BadInput,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. The code identifies the failure class; the message
/// carries the offending values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace segalis
