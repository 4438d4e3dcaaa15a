#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rppg/frame.hpp"
#include "rppg/landmarks.hpp"

namespace rppg {

inline constexpr const char* kPixelFormat = "rgb8-interleaved";

struct FrameStreamHeader {
  int width = 0;
  int height = 0;
  double fps = 30.0;
  std::size_t frame_count = 0;
  std::string pixel_format = kPixelFormat;

  std::size_t frame_bytes() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  }
};

FrameStreamHeader read_frame_header(const std::filesystem::path& path);
void write_frame_header(const std::filesystem::path& path, const FrameStreamHeader& h);

/// Raw RGB8 payload plus JSON header sidecar. The payload size is checked
/// against the header when the stream is opened.
class FrameStreamReader final : public FrameSource {
 public:
  FrameStreamReader(const std::filesystem::path& header_path,
                    const std::filesystem::path& payload_path);

  const FrameStreamHeader& header() const noexcept { return header_; }
  int width() const override { return header_.width; }
  int height() const override { return header_.height; }
  double fps() const override { return header_.fps; }
  std::optional<Frame> next() override;

  /// Timestamp of the most recently returned frame (index / fps).
  double last_timestamp() const noexcept;

 private:
  FrameStreamHeader header_;
  std::ifstream payload_;
  std::size_t next_index_ = 0;
};

FrameStreamReader read_frame_stream(const std::filesystem::path& header_path,
                                    const std::filesystem::path& payload_path);

/// Drains `frames` into a payload file and writes the matching header.
/// Returns the header that was written.
FrameStreamHeader write_frame_stream(const std::filesystem::path& header_path,
                                     const std::filesystem::path& payload_path,
                                     FrameSource& frames);

std::vector<LandmarkSet> read_landmark_stream(const std::filesystem::path& path);
void write_landmark_stream(const std::filesystem::path& path,
                           const std::vector<LandmarkSet>& stream);

}  // namespace rppg
