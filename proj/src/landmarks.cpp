#include "rppg/landmarks.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <json.hpp>

#include "rppg/error.hpp"

namespace rppg {

using nlohmann::json;

namespace {

std::string frame_label(const json& j) {
  if (j.is_object() && j.contains("frame_index") &&
      j["frame_index"].is_number_integer()) {
    return "frame " + std::to_string(j["frame_index"].get<std::int64_t>());
  }
  return "frame <unknown>";
}

void require_detected(const LandmarkSet& lms) {
  if (!lms.detected) {
    throw Error(ErrorKind::NoFace,
                "frame " + std::to_string(lms.frame_index) +
                    ": no face detected");
  }
}

}  // namespace

LandmarkSet parse_landmark_frame(std::string_view record) {
  json j = json::parse(record, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::Parse,
                "malformed landmark record (" + frame_label(j) + ")");
  }
  const auto label = frame_label(j);
  LandmarkSet lms;
  try {
    lms.frame_index = j.at("frame_index").get<std::int64_t>();
    lms.timestamp = j.at("timestamp_s").get<double>();
    lms.detected = j.at("detected").get<bool>();
    lms.occluded_forehead = j.value("occluded_forehead", false);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse,
                label + ": missing or mistyped field: " + e.what());
  }

  if (!lms.detected) return lms;

  const auto it = j.find("points");
  if (it == j.end() || !it->is_array()) {
    throw Error(ErrorKind::Schema, label + ": detected frame without points");
  }
  if (it->size() != kLandmarkCount) {
    throw Error(ErrorKind::Schema,
                label + ": expected " + std::to_string(kLandmarkCount) +
                    " points, got " + std::to_string(it->size()));
  }
  lms.points.reserve(kLandmarkCount);
  for (const auto& p : *it) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() ||
        !p[1].is_number() || !p[2].is_number()) {
      throw Error(ErrorKind::Parse, label + ": point is not [x, y, z]");
    }
    Point3 pt{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
    if (!(pt.x >= 0.0 && pt.x <= 1.0 && pt.y >= 0.0 && pt.y <= 1.0) ||
        !std::isfinite(pt.z)) {
      throw Error(ErrorKind::Schema,
                  label + ": landmark coordinate outside [0, 1]");
    }
    lms.points.push_back(pt);
  }
  return lms;
}

std::string serialize_landmark_frame(const LandmarkSet& lms) {
  json j;
  j["frame_index"] = lms.frame_index;
  j["timestamp_s"] = lms.timestamp;
  j["detected"] = lms.detected;
  if (lms.occluded_forehead) j["occluded_forehead"] = true;
  auto pts = json::array();
  for (const auto& p : lms.points) pts.push_back({p.x, p.y, p.z});
  j["points"] = std::move(pts);
  return j.dump();
}

void validate_landmark_stream(const std::vector<LandmarkSet>& stream) {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (!(stream[i].timestamp > stream[i - 1].timestamp)) {
      throw Error(ErrorKind::Schema,
                  "frame " + std::to_string(stream[i].frame_index) +
                      ": timestamps must be strictly increasing");
    }
  }
}

YawAngle estimate_yaw(const LandmarkSet& lms) {
  require_detected(lms);
  if (lms.points.size() != kLandmarkCount) {
    throw Error(ErrorKind::Schema, "landmark set has wrong point count");
  }
  const Point3& left = lms.points[kLeftCheekLandmark];
  const Point3& right = lms.points[kRightCheekLandmark];
  // Under a rigid turn about the vertical axis the cheek pair's depth
  // difference grows as sin(yaw) while its image-plane span shrinks as
  // cos(yaw).
  const double dz = left.z - right.z;
  const double span = std::hypot(right.x - left.x, right.y - left.y);
  if (dz == 0.0 && span == 0.0) return {0.0};
  return {std::atan2(dz, span) * 180.0 / std::numbers::pi};
}

PixelPoint to_pixel(const Point3& p, int frame_w, int frame_h) {
  return {std::lround(p.x * frame_w), std::lround(p.y * frame_h)};
}

bool forehead_visible(const LandmarkSet& lms, int frame_w, int frame_h,
                      int roi_size) {
  require_detected(lms);
  if (lms.points.size() != kLandmarkCount) {
    throw Error(ErrorKind::Schema, "landmark set has wrong point count");
  }
  if (lms.occluded_forehead) return false;
  const auto c = to_pixel(lms.points[kForeheadLandmark], frame_w, frame_h);
  const long x0 = c.x - roi_size / 2;
  const long y0 = c.y - roi_size / 2;
  return x0 >= 0 && y0 >= 0 && x0 + roi_size <= frame_w &&
         y0 + roi_size <= frame_h;
}

LandmarkSet mirror_horizontal(const LandmarkSet& lms) {
  LandmarkSet out = lms;
  for (auto& p : out.points) p.x = 1.0 - p.x;
  if (out.points.size() == kLandmarkCount) {
    std::swap(out.points[kLeftCheekLandmark], out.points[kRightCheekLandmark]);
  }
  return out;
}

}  // namespace rppg
