#include "projchan/error.hpp"

namespace projchan {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
    case ErrorKind::BadDims: return "BadDims";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::NotProjectiveClass: return "NotProjectiveClass";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::NotWeaklyCovariant: return "NotWeaklyCovariant";
    case ErrorKind::OptimalStateMismatch: return "OptimalStateMismatch";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::NonPureEnsemble: return "NonPureEnsemble";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace projchan
