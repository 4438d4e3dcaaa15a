#include "rppg/roi.hpp"

#include <string>

#include "rppg/error.hpp"

namespace rppg {

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::Forehead: return "forehead";
    case Region::LeftCheek: return "left_cheek";
    case Region::RightCheek: return "right_cheek";
  }
  return "forehead";
}

std::optional<Region> region_from_string(std::string_view s) noexcept {
  if (s == "forehead") return Region::Forehead;
  if (s == "left_cheek") return Region::LeftCheek;
  if (s == "right_cheek") return Region::RightCheek;
  return std::nullopt;
}

std::size_t center_landmark(Region r) noexcept {
  switch (r) {
    case Region::Forehead: return kForeheadLandmark;
    case Region::LeftCheek: return kLeftCheekLandmark;
    case Region::RightCheek: return kRightCheekLandmark;
  }
  return kForeheadLandmark;
}

Rect roi_rect(const Point3& center, int frame_w, int frame_h, int roi_size) {
  const auto c = to_pixel(center, frame_w, frame_h);
  return {c.x - roi_size / 2, c.y - roi_size / 2, roi_size, roi_size};
}

RoiSelection select_roi(const LandmarkSet& lms, YawAngle yaw, int frame_w,
                        int frame_h, const RoiConfig& cfg) {
  if (cfg.roi_size < 1) throw Error(ErrorKind::Config, "roi_size must be >= 1");
  Region region = Region::LeftCheek;
  if (forehead_visible(lms, frame_w, frame_h, cfg.roi_size)) {
    region = Region::Forehead;
  } else if (yaw.degrees > cfg.yaw_threshold_deg) {
    region = Region::RightCheek;
  }
  RoiSelection sel;
  sel.region = region;
  sel.center_landmark = center_landmark(region);
  sel.rect = roi_rect(lms.points[sel.center_landmark], frame_w, frame_h,
                      cfg.roi_size);
  if (!sel.rect.inside(frame_w, frame_h)) {
    throw Error(ErrorKind::RoiOutOfBounds,
                "frame " + std::to_string(lms.frame_index) + ": " +
                    std::string(to_string(region)) + " roi leaves the frame");
  }
  return sel;
}

RgbSample crop_mean_rgb(const Frame& frame, const RoiSelection& roi,
                        double timestamp) {
  if (frame.width <= 0 || frame.height <= 0 ||
      frame.pixels.size() !=
          static_cast<std::size_t>(frame.width) * frame.height * 3) {
    throw Error(ErrorKind::Format, "frame buffer size does not match dimensions");
  }
  const Rect& r = roi.rect;
  if (r.width <= 0 || r.height <= 0 || !r.inside(frame.width, frame.height)) {
    throw Error(ErrorKind::RoiOutOfBounds, "roi rectangle outside frame");
  }
  std::uint64_t sum[3] = {0, 0, 0};
  for (long y = r.y0; y < r.y0 + r.height; ++y) {
    const auto* row = frame.pixels.data() +
                      (static_cast<std::size_t>(y) * frame.width + r.x0) * 3;
    for (long x = 0; x < r.width; ++x) {
      sum[0] += row[x * 3];
      sum[1] += row[x * 3 + 1];
      sum[2] += row[x * 3 + 2];
    }
  }
  const double n = static_cast<double>(r.width) * static_cast<double>(r.height);
  return {timestamp, sum[0] / n, sum[1] / n, sum[2] / n, roi.region};
}

}  // namespace rppg
