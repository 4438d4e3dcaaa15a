#include "rppg/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "rppg/error.hpp"

namespace rppg {

using nlohmann::json;

std::size_t PipelineConfig::pos_window_frames(double fps) const {
  return static_cast<std::size_t>(std::lround(pos_window_s * fps));
}

std::size_t PipelineConfig::hr_window_frames(double fps) const {
  return static_cast<std::size_t>(std::lround(hr_window_s * fps));
}

void PipelineConfig::validate(double fps) const {
  if (roi.roi_size < 1) throw Error(ErrorKind::Config, "roi_size must be >= 1");
  if (pos_window_frames(fps) < 2) {
    throw Error(ErrorKind::Config, "pos window must span at least 2 frames");
  }
  if (!(hr_window_s > 0.0)) throw Error(ErrorKind::Config, "hr_window_s must be > 0");
  if (!(welch_segment_s > 0.0)) throw Error(ErrorKind::Config, "welch_segment_s must be > 0");
  if (!(peaks.min_separation_s >= 0.0) || !(peaks.prominence_factor >= 0.0)) {
    throw Error(ErrorKind::Config, "peak parameters must be non-negative");
  }
  filter.validate(fps);
}

void merge_config(PipelineConfig& cfg, const json& j) {
  static const std::set<std::string> known = {
      "roi_size",      "yaw_threshold_deg", "asf_delta",         "pulse_direction",
      "band",          "ma_points",         "pos_window_s",      "hr_window_s",
      "welch_segment_s", "min_peak_separation_s", "prominence_factor"};
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
  }
  try {
    if (j.contains("roi_size")) cfg.roi.roi_size = j["roi_size"].get<int>();
    if (j.contains("yaw_threshold_deg")) cfg.roi.yaw_threshold_deg = j["yaw_threshold_deg"].get<double>();
    if (j.contains("asf_delta")) cfg.filter.asf_delta = j["asf_delta"].get<double>();
    if (j.contains("pulse_direction")) {
      auto u = j["pulse_direction"].get<std::array<double, 3>>();
      const double n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
      if (!(n > 0.0)) throw Error(ErrorKind::Config, "pulse_direction must be nonzero");
      if (std::abs(n - 1.0) > 1e-12) u = {u[0] / n, u[1] / n, u[2] / n};
      cfg.filter.pulse_direction = u;
    }
    if (j.contains("band")) {
      auto band = j["band"].get<std::array<double, 2>>();
      cfg.filter.band_lo_hz = band[0];
      cfg.filter.band_hi_hz = band[1];
    }
    if (j.contains("ma_points")) {
      if (j["ma_points"].is_null()) {
        cfg.filter.ma_points.reset();
      } else {
        cfg.filter.ma_points = j["ma_points"].get<int>();
      }
    }
    if (j.contains("pos_window_s")) cfg.pos_window_s = j["pos_window_s"].get<double>();
    if (j.contains("hr_window_s")) cfg.hr_window_s = j["hr_window_s"].get<double>();
    if (j.contains("welch_segment_s")) cfg.welch_segment_s = j["welch_segment_s"].get<double>();
    if (j.contains("min_peak_separation_s")) {
      cfg.peaks.min_separation_s = j["min_peak_separation_s"].get<double>();
    }
    if (j.contains("prominence_factor")) {
      cfg.peaks.prominence_factor = j["prominence_factor"].get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("mistyped config value: ") + e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error(ErrorKind::Parse, "malformed config " + path.string());
  PipelineConfig cfg;
  merge_config(cfg, j);
  return cfg;
}

json to_json(const PipelineConfig& cfg) {
  json j{{"roi_size", cfg.roi.roi_size},
         {"yaw_threshold_deg", cfg.roi.yaw_threshold_deg},
         {"asf_delta", cfg.filter.asf_delta},
         {"pulse_direction", cfg.filter.pulse_direction},
         {"band", {cfg.filter.band_lo_hz, cfg.filter.band_hi_hz}},
         {"pos_window_s", cfg.pos_window_s},
         {"hr_window_s", cfg.hr_window_s},
         {"welch_segment_s", cfg.welch_segment_s},
         {"min_peak_separation_s", cfg.peaks.min_separation_s},
         {"prominence_factor", cfg.peaks.prominence_factor}};
  j["ma_points"] = cfg.filter.ma_points ? json(*cfg.filter.ma_points) : json(nullptr);
  return j;
}

}  // namespace rppg
