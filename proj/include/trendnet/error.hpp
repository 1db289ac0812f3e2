#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trendnet {

enum class ErrorKind {
  EmptySeries,
  InvalidValue,
  InsufficientData,
  NoOverlap,
  DuplicateLocation,
  GridMismatch,
  KeywordMismatch,
  OnsetNotFound,
  ZeroVariance,
  InvalidMatrix,
  InvalidTree,
  Disconnected,
  ParseError,
  FetchFailed,
  CacheError,
  UnsupportedFormat,
  LabelMismatch,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported as trendnet::Error; kind() carries the
// category so callers (and the CLI) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace trendnet
