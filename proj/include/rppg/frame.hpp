#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rppg {

/// One interleaved RGB8 video frame.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3, row-major

  std::span<const std::uint8_t> view() const { return pixels; }
};

/// Pull-style source of frames in stream order.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual int width() const = 0;
  virtual int height() const = 0;
  virtual double fps() const = 0;
  virtual std::optional<Frame> next() = 0;
};

/// Serves frames held in memory.
class VectorFrameSource final : public FrameSource {
 public:
  VectorFrameSource(std::vector<Frame> frames, double fps);

  int width() const override { return width_; }
  int height() const override { return height_; }
  double fps() const override { return fps_; }
  std::optional<Frame> next() override;

 private:
  std::vector<Frame> frames_;
  std::size_t pos_ = 0;
  int width_ = 0;
  int height_ = 0;
  double fps_ = 0.0;
};

/// Integer-factor block averaging, rounded back to 8 bits.
Frame downsample(const Frame& frame, int factor);

/// Wraps another source and block-downsamples every frame.
class DownsampledFrameSource final : public FrameSource {
 public:
  DownsampledFrameSource(FrameSource& inner, int factor);

  int width() const override { return inner_.width() / factor_; }
  int height() const override { return inner_.height() / factor_; }
  double fps() const override { return inner_.fps(); }
  std::optional<Frame> next() override;

 private:
  FrameSource& inner_;
  int factor_;
};

}  // namespace rppg
