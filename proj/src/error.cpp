#include "trendnet/error.hpp"

namespace trendnet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NoOverlap: return "NoOverlap";
    case ErrorKind::DuplicateLocation: return "DuplicateLocation";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::KeywordMismatch: return "KeywordMismatch";
    case ErrorKind::OnsetNotFound: return "OnsetNotFound";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::InvalidTree: return "InvalidTree";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FetchFailed: return "FetchFailed";
    case ErrorKind::CacheError: return "CacheError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace trendnet
