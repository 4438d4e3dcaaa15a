#include "rppg/frame.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rppg/error.hpp"

namespace rppg {

VectorFrameSource::VectorFrameSource(std::vector<Frame> frames, double fps)
    : frames_(std::move(frames)), fps_(fps) {
  if (!frames_.empty()) {
    width_ = frames_.front().width;
    height_ = frames_.front().height;
  }
}

std::optional<Frame> VectorFrameSource::next() {
  if (pos_ >= frames_.size()) return std::nullopt;
  return frames_[pos_++];
}

Frame downsample(const Frame& frame, int factor) {
  if (factor < 1) throw Error(ErrorKind::Config, "downsample factor must be >= 1");
  if (frame.width % factor != 0 || frame.height % factor != 0) {
    throw Error(ErrorKind::Config,
                "downsample factor " + std::to_string(factor) +
                    " does not divide frame dimensions");
  }
  if (frame.pixels.size() !=
      static_cast<std::size_t>(frame.width) * frame.height * 3) {
    throw Error(ErrorKind::Format, "frame buffer size does not match dimensions");
  }
  Frame out;
  out.width = frame.width / factor;
  out.height = frame.height / factor;
  out.pixels.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  const double area = static_cast<double>(factor) * factor;
  for (int oy = 0; oy < out.height; ++oy) {
    for (int ox = 0; ox < out.width; ++ox) {
      unsigned sum[3] = {0, 0, 0};
      for (int dy = 0; dy < factor; ++dy) {
        const auto* row = frame.pixels.data() +
                          (static_cast<std::size_t>(oy * factor + dy) * frame.width +
                           static_cast<std::size_t>(ox) * factor) * 3;
        for (int dx = 0; dx < factor; ++dx) {
          sum[0] += row[dx * 3];
          sum[1] += row[dx * 3 + 1];
          sum[2] += row[dx * 3 + 2];
        }
      }
      auto* dst = out.pixels.data() +
                  (static_cast<std::size_t>(oy) * out.width + ox) * 3;
      for (int c = 0; c < 3; ++c) {
        dst[c] = static_cast<std::uint8_t>(std::lround(sum[c] / area));
      }
    }
  }
  return out;
}

DownsampledFrameSource::DownsampledFrameSource(FrameSource& inner, int factor)
    : inner_(inner), factor_(factor) {
  if (factor < 1) throw Error(ErrorKind::Config, "downsample factor must be >= 1");
}

std::optional<Frame> DownsampledFrameSource::next() {
  auto f = inner_.next();
  if (!f) return std::nullopt;
  return downsample(*f, factor_);
}

}  // namespace rppg
