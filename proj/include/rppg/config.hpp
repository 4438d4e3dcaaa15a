#pragma once

#include <filesystem>

#include <json.hpp>

#include "rppg/filters.hpp"
#include "rppg/hr.hpp"
#include "rppg/roi.hpp"

namespace rppg {

struct PipelineConfig {
  RoiConfig roi;
  FilterConfig filter;
  PeakConfig peaks;
  double pos_window_s = 1.6;
  double hr_window_s = 10.0;
  double welch_segment_s = 10.0;

  std::size_t pos_window_frames(double fps) const;
  std::size_t hr_window_frames(double fps) const;
  void validate(double fps) const;
};

/// Keys absent from `j` keep their current values; unknown keys are
/// rejected.
void merge_config(PipelineConfig& cfg, const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& cfg);

}  // namespace rppg
