#include "rppg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "rppg/error.hpp"
#include "rppg/filters.hpp"

namespace rppg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHarmonic = 0.3;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double specular_at(const SynthConfig& cfg, double t) {
  double s = 0.0;
  for (const auto& ev : cfg.specular_events) {
    if (ev.duration <= 0.0 || t < ev.time || t > ev.time + ev.duration) continue;
    s += ev.magnitude * 0.5 * (1.0 - std::cos(kTwoPi * (t - ev.time) / ev.duration));
  }
  return s;
}

}  // namespace

std::array<double, 3> SynthConfig::default_direction() {
  return FilterConfig::default_pulse_direction();
}

void SynthConfig::validate() const {
  if (!(hr_bpm >= 42.0 && hr_bpm <= 240.0)) {
    throw Error(ErrorKind::Config, "hr_bpm must lie in the detection band [42, 240]");
  }
  if (!(fps > 0.0)) throw Error(ErrorKind::Config, "fps must be > 0");
  if (!(duration > 0.0)) throw Error(ErrorKind::Config, "duration must be > 0");
  if (!(pulse_rel_amp >= 0.0 && pulse_rel_amp < 0.1)) {
    throw Error(ErrorKind::Config, "pulse_rel_amp must lie in [0, 0.1)");
  }
  for (double b : skin_base) {
    if (!(b >= 0.0 && b <= 255.0)) throw Error(ErrorKind::Config, "skin_base outside [0, 255]");
  }
  if (!(std::abs(intensity_amp) < 1.0)) {
    throw Error(ErrorKind::Config, "intensity modulation amplitude must be < 1");
  }
  if (!(noise_sd >= 0.0)) throw Error(ErrorKind::Config, "noise_sd must be >= 0");
  if (!seed) throw Error(ErrorKind::Config, "synthetic config requires a seed");
  if (!(face_scale > 0.0 && face_scale < 1.0)) {
    throw Error(ErrorKind::Config, "face_scale must lie in (0, 1)");
  }
  for (std::size_t i = 1; i < yaw_profile.size(); ++i) {
    if (!(yaw_profile[i].first > yaw_profile[i - 1].first)) {
      throw Error(ErrorKind::Config, "yaw_profile times must increase");
    }
  }
  for (const auto& [t, deg] : yaw_profile) {
    if (!(deg > -90.0 && deg < 90.0)) throw Error(ErrorKind::Config, "yaw outside (-90, 90)");
  }
}

std::size_t SynthConfig::frame_count() const {
  return static_cast<std::size_t>(std::llround(duration * fps));
}

std::array<double, 3> synth_color(const SynthConfig& cfg, double t) {
  const double f = cfg.hr_bpm / 60.0;
  const double p = std::sin(kTwoPi * f * t) + kHarmonic * std::sin(2.0 * kTwoPi * f * t);
  const double intensity = 1.0 + cfg.intensity_amp * std::sin(kTwoPi * cfg.intensity_freq_hz * t);
  const double spec = specular_at(cfg, t);
  std::array<double, 3> c{};
  for (std::size_t i = 0; i < 3; ++i) {
    c[i] = intensity *
           (cfg.skin_base[i] * (1.0 + cfg.pulse_rel_amp * cfg.pulse_direction[i] * p) + spec);
  }
  return c;
}

PeakTrain synth_truth_peaks(const SynthConfig& cfg) {
  // d/dθ [sin θ + h sin 2θ] = 0  <=>  4h cos²θ + cos θ - 2h = 0
  const double h = kHarmonic;
  const double c = (-1.0 + std::sqrt(1.0 + 32.0 * h * h)) / (8.0 * h);
  const double phase = std::acos(c) / kTwoPi;
  const double period = 60.0 / cfg.hr_bpm;
  PeakTrain truth;
  for (std::size_t k = 0;; ++k) {
    const double t = (phase + static_cast<double>(k)) * period;
    if (t >= cfg.duration) break;
    truth.peak_times.push_back(t);
    truth.peak_indices.push_back(static_cast<std::size_t>(std::lround(t * cfg.fps)));
  }
  return truth;
}

SynthTrace synth_trace(const SynthConfig& cfg) {
  cfg.validate();
  SynthTrace out;
  out.trace.fps = cfg.fps;
  const std::size_t n = cfg.frame_count();
  out.trace.samples.reserve(n);
  std::mt19937_64 rng(*cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.fps;
    auto c = synth_color(cfg, t);
    if (cfg.noise_sd > 0.0) {
      for (auto& v : c) v += cfg.noise_sd * noise(rng);
    }
    for (auto& v : c) v = std::clamp(v, 0.0, 255.0);
    out.trace.samples.push_back({t, c[0], c[1], c[2], Region::Forehead});
  }
  out.truth = synth_truth_peaks(cfg);
  return out;
}

double yaw_at(const SynthConfig& cfg, double t) {
  const auto& prof = cfg.yaw_profile;
  if (prof.empty()) return 0.0;
  if (t <= prof.front().first) return prof.front().second;
  if (t >= prof.back().first) return prof.back().second;
  const auto it = std::upper_bound(prof.begin(), prof.end(), t,
                                   [](double v, const auto& p) { return v < p.first; });
  const auto& [t1, y1] = *it;
  const auto& [t0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (t - t0) / (t1 - t0);
}

const std::vector<Point3>& canonical_face() {
  static const std::vector<Point3> face = [] {
    std::vector<Point3> pts(kLandmarkCount);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < kLandmarkCount; ++k) {
      const double r = std::sqrt((static_cast<double>(k) + 0.5) / kLandmarkCount);
      const double a = golden * static_cast<double>(k);
      pts[k] = {0.45 * r * std::cos(a), 0.55 * r * std::sin(a), -0.15 * (1.0 - r * r)};
    }
    pts[kForeheadLandmark] = {0.0, -0.30, -0.08};
    pts[kLeftCheekLandmark] = {-0.22, 0.05, 0.0};
    pts[kRightCheekLandmark] = {0.22, 0.05, 0.0};
    return pts;
  }();
  return face;
}

LandmarkSet posed_landmarks(double yaw_deg, int frame_w, int frame_h, double face_scale) {
  const double a = yaw_deg * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  const double aspect = static_cast<double>(frame_w) / static_cast<double>(frame_h);
  LandmarkSet lms;
  lms.detected = true;
  lms.points.reserve(kLandmarkCount);
  for (const auto& p : canonical_face()) {
    const double xr = p.x * c + p.z * s;
    const double zr = -p.x * s + p.z * c;
    lms.points.push_back({0.5 + face_scale * xr, 0.5 + face_scale * aspect * p.y,
                          face_scale * zr});
  }
  return lms;
}

SynthVideo::SynthVideo(SynthConfig cfg, int width, int height, int roi_size)
    : cfg_(std::move(cfg)), width_(width), height_(height) {
  cfg_.validate();
  if (roi_size < 1 || width < 4 * roi_size || height < 4 * roi_size) {
    throw Error(ErrorKind::Config,
                "frame " + std::to_string(width) + "x" + std::to_string(height) +
                    " is smaller than 4x the roi size " + std::to_string(roi_size));
  }
  count_ = cfg_.frame_count();
}

Frame SynthVideo::frame(std::size_t index) const {
  const double t = static_cast<double>(index) / cfg_.fps;
  const auto color = synth_color(cfg_, t);
  Frame f;
  f.width = width_;
  f.height = height_;
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  f.pixels.resize(n * 3);
  auto quantize = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };
  if (cfg_.noise_sd <= 0.0) {
    const std::uint8_t q[3] = {quantize(color[0]), quantize(color[1]), quantize(color[2])};
    for (std::size_t i = 0; i < n; ++i) {
      f.pixels[i * 3] = q[0];
      f.pixels[i * 3 + 1] = q[1];
      f.pixels[i * 3 + 2] = q[2];
    }
    return f;
  }
  auto rng = substream(*cfg_.seed, index);
  std::normal_distribution<double> noise(0.0, cfg_.noise_sd);
  for (std::size_t i = 0; i < n * 3; ++i) {
    f.pixels[i] = quantize(color[i % 3] + noise(rng));
  }
  return f;
}

LandmarkSet SynthVideo::landmarks(std::size_t index) const {
  const double t = static_cast<double>(index) / cfg_.fps;
  LandmarkSet lms = posed_landmarks(yaw_at(cfg_, t), width_, height_, cfg_.face_scale);
  lms.frame_index = static_cast<std::int64_t>(index);
  lms.timestamp = t;
  lms.occluded_forehead = cfg_.forehead_occluded;
  return lms;
}

std::vector<LandmarkSet> SynthVideo::all_landmarks() const {
  std::vector<LandmarkSet> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) out.push_back(landmarks(i));
  return out;
}

std::optional<Frame> SynthFrameSource::next() {
  if (pos_ >= video_.frame_count()) return std::nullopt;
  return video_.frame(pos_++);
}

}  // namespace rppg
