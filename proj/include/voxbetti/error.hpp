#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voxbetti {

enum class ErrorCode {
  Format,               // malformed file (bad magic, bad header, bad CSV)
  UnsupportedDatatype,  // NIfTI datatype we do not decode
  Truncation,           // fewer bytes than the dims imply
  InvalidData,          // NaN / Inf / empty input
  OutOfRange,           // slab window or index outside the volume
  OracleTooLarge,       // dense rank oracle refused an oversized complex
  DegenerateLabels,     // training data with a single class
  Shape,                // feature-vector length mismatch
  EmptySelection,       // feature threshold above every importance
  DegenerateCovariance, // PCA on zero-variance data
  InsufficientData,     // class too small to split
  AucUndefined,         // AUC requested on single-class ground truth
  MissingClass,         // curve summary with an empty class
  Config,               // invalid pipeline configuration
  Io,                   // filesystem failure
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Format: return "format error";
    case ErrorCode::UnsupportedDatatype: return "unsupported datatype";
    case ErrorCode::Truncation: return "truncated data";
    case ErrorCode::InvalidData: return "invalid data";
    case ErrorCode::OutOfRange: return "out of range";
    case ErrorCode::OracleTooLarge: return "oracle too large";
    case ErrorCode::DegenerateLabels: return "degenerate labels";
    case ErrorCode::Shape: return "shape mismatch";
    case ErrorCode::EmptySelection: return "empty selection";
    case ErrorCode::DegenerateCovariance: return "degenerate covariance";
    case ErrorCode::InsufficientData: return "insufficient data";
    case ErrorCode::AucUndefined: return "AUC undefined";
    case ErrorCode::MissingClass: return "missing class";
    case ErrorCode::Config: return "config error";
    case ErrorCode::Io: return "I/O error";
  }
  return "error";
}

}  // namespace voxbetti
