#include "rppg/error.hpp"

namespace rppg {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::NoFace: return "no face detected";
    case ErrorKind::RoiOutOfBounds: return "roi out of bounds";
    case ErrorKind::Format: return "format error";
    case ErrorKind::TruncatedStream: return "truncated stream";
    case ErrorKind::DegenerateWindow: return "degenerate window";
    case ErrorKind::DegenerateSpectrum: return "degenerate spectrum";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::InsufficientPeaks: return "insufficient peaks";
    case ErrorKind::Alignment: return "alignment error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Join: return "join error";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace rppg
