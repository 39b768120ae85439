#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace projchan {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  DimensionOverflow,
  BadDims,
  DimMismatch,
  InvalidState,
  NotProjectiveClass,
  SpecInvalid,
  BadAlpha,
  NotWeaklyCovariant,
  OptimalStateMismatch,
  SpecMismatch,
  NonPureEnsemble,
  ParseError,
  ValidationError,
};

std::string_view error_kind_name(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to an exit code and tests can match on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace projchan
