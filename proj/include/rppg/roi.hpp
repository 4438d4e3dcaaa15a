#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "rppg/frame.hpp"
#include "rppg/landmarks.hpp"

namespace rppg {

enum class Region { Forehead, LeftCheek, RightCheek };

std::string_view to_string(Region r) noexcept;
std::optional<Region> region_from_string(std::string_view s) noexcept;
std::size_t center_landmark(Region r) noexcept;

struct Rect {
  long x0 = 0;
  long y0 = 0;
  long width = 0;
  long height = 0;

  bool inside(int frame_w, int frame_h) const noexcept {
    return x0 >= 0 && y0 >= 0 && x0 + width <= frame_w &&
           y0 + height <= frame_h;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct RoiConfig {
  int roi_size = 40;
  double yaw_threshold_deg = 15.0;
};

struct RoiSelection {
  Region region = Region::Forehead;
  Rect rect;
  std::size_t center_landmark = kForeheadLandmark;
};

struct RgbSample {
  double timestamp = 0.0;
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  Region region = Region::Forehead;
};

/// Square of side `roi_size` centred on the landmark's rounded pixel position.
Rect roi_rect(const Point3& center, int frame_w, int frame_h, int roi_size);

/// Adaptive choice: forehead when visible, otherwise the right cheek when the
/// head is turned past the yaw threshold, otherwise the left cheek. The
/// rectangle is never clamped; a cheek rectangle leaving the frame throws.
RoiSelection select_roi(const LandmarkSet& lms, YawAngle yaw, int frame_w,
                        int frame_h, const RoiConfig& cfg = {});

/// Arithmetic mean of each channel over the ROI rectangle.
RgbSample crop_mean_rgb(const Frame& frame, const RoiSelection& roi,
                        double timestamp = 0.0);

}  // namespace rppg
