#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rppg {

/// Number of points produced by the face-mesh landmark model.
inline constexpr std::size_t kLandmarkCount = 468;

/// Mesh indices used as ROI centres.
inline constexpr std::size_t kForeheadLandmark = 151;
inline constexpr std::size_t kLeftCheekLandmark = 50;
inline constexpr std::size_t kRightCheekLandmark = 280;

struct Point3 {
  double x = 0.0;  // normalized image column, [0, 1]
  double y = 0.0;  // normalized image row, [0, 1]
  double z = 0.0;  // relative depth, same scale as x

  friend bool operator==(const Point3&, const Point3&) = default;
};

/// One frame's landmarks. `points` is empty when no face was detected.
struct LandmarkSet {
  std::int64_t frame_index = 0;
  double timestamp = 0.0;
  bool detected = false;
  bool occluded_forehead = false;
  std::vector<Point3> points;

  friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;
};

/// Head yaw in degrees, in [-90, 90]. Zero for a frontal symmetric face.
struct YawAngle {
  double degrees = 0.0;
};

struct PixelPoint {
  long x = 0;
  long y = 0;
};

/// Parses one record of the newline-delimited landmark stream.
LandmarkSet parse_landmark_frame(std::string_view record);

/// Serializes a LandmarkSet into a single-line record (no trailing newline).
std::string serialize_landmark_frame(const LandmarkSet& lms);

/// Checks strictly increasing timestamps across a parsed stream.
void validate_landmark_stream(const std::vector<LandmarkSet>& stream);

YawAngle estimate_yaw(const LandmarkSet& lms);

/// Landmark position in pixels, rounded to nearest.
PixelPoint to_pixel(const Point3& p, int frame_w, int frame_h);

bool forehead_visible(const LandmarkSet& lms, int frame_w, int frame_h,
                      int roi_size);

/// Horizontal mirror of a face: x -> 1 - x and the two cheek anchors swap
/// labels so that "left" still names the anatomical left cheek.
LandmarkSet mirror_horizontal(const LandmarkSet& lms);

}  // namespace rppg
