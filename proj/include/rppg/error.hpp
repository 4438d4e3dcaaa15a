#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rppg {

enum class ErrorKind {
  Parse,
  Schema,
  NoFace,
  RoiOutOfBounds,
  Format,
  TruncatedStream,
  DegenerateWindow,
  DegenerateSpectrum,
  InsufficientData,
  InsufficientPeaks,
  Alignment,
  Config,
  Join,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rppg
