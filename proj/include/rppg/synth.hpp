#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rppg/frame.hpp"
#include "rppg/hr.hpp"
#include "rppg/landmarks.hpp"
#include "rppg/pos.hpp"

namespace rppg {

struct SpecularEvent {
  double time = 0.0;      // onset, seconds
  double duration = 0.0;  // seconds
  double magnitude = 0.0; // peak intensity added to every channel
};

struct SynthConfig {
  double hr_bpm = 72.0;
  double fps = 30.0;
  double duration = 30.0;
  double pulse_rel_amp = 0.002;
  std::array<double, 3> skin_base = {170.0, 120.0, 100.0};
  std::array<double, 3> pulse_direction = default_direction();
  double intensity_amp = 0.0;
  double intensity_freq_hz = 0.3;
  std::vector<SpecularEvent> specular_events;
  double noise_sd = 0.0;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<double, double>> yaw_profile;  // (time s, degrees)
  bool forehead_occluded = false;
  double face_scale = 0.4;  // face width as a fraction of frame width

  static std::array<double, 3> default_direction();
  void validate() const;
  std::size_t frame_count() const;
};

struct SynthTrace {
  RgbTrace trace;
  PeakTrain truth;
};

/// Noise-free colour at time t: I(t) * [base * (1 + amp * dir * p(t)) + spec(t)]
/// with p(t) = sin(2 pi f t) + 0.3 sin(4 pi f t).
std::array<double, 3> synth_color(const SynthConfig& cfg, double t);

/// Times of the maxima of p(t) inside [0, duration).
PeakTrain synth_truth_peaks(const SynthConfig& cfg);

/// Colour trace plus per-channel Gaussian noise; identical seeds give
/// identical traces.
SynthTrace synth_trace(const SynthConfig& cfg);

/// Yaw in degrees at time t, piecewise-linear through yaw_profile and held
/// flat beyond its ends.
double yaw_at(const SynthConfig& cfg, double t);

/// 468-point face in head coordinates (origin at the face centre, unit face
/// width). Cheek anchors are mirror images at equal depth.
const std::vector<Point3>& canonical_face();

/// The canonical face turned by `yaw_deg` about the vertical axis and
/// orthographically projected into normalized image coordinates.
LandmarkSet posed_landmarks(double yaw_deg, int frame_w, int frame_h,
                            double face_scale = 0.4);

/// Lazily rendered synthetic video: uniform frames of the trace colour with
/// per-pixel noise, plus matching landmark records.
class SynthVideo {
 public:
  SynthVideo(SynthConfig cfg, int width, int height, int roi_size = 40);

  const SynthConfig& config() const noexcept { return cfg_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t frame_count() const noexcept { return count_; }

  Frame frame(std::size_t index) const;
  LandmarkSet landmarks(std::size_t index) const;
  std::vector<LandmarkSet> all_landmarks() const;

 private:
  SynthConfig cfg_;
  int width_;
  int height_;
  std::size_t count_;
};

class SynthFrameSource final : public FrameSource {
 public:
  explicit SynthFrameSource(const SynthVideo& video) : video_(video) {}

  int width() const override { return video_.width(); }
  int height() const override { return video_.height(); }
  double fps() const override { return video_.config().fps; }
  std::optional<Frame> next() override;

 private:
  const SynthVideo& video_;
  std::size_t pos_ = 0;
};

}  // namespace rppg
