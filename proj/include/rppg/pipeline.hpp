#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rppg/config.hpp"
#include "rppg/filters.hpp"
#include "rppg/frame.hpp"
#include "rppg/hr.hpp"
#include "rppg/landmarks.hpp"
#include "rppg/pos.hpp"

namespace rppg {

struct RoiTimelineEntry {
  std::int64_t frame_index = 0;
  Region region = Region::Forehead;

  friend bool operator==(const RoiTimelineEntry&, const RoiTimelineEntry&) = default;
};

struct PipelineDiagnostics {
  std::size_t frames_total = 0;
  std::size_t frames_detected = 0;
  std::vector<std::int64_t> gaps;  // frame indices without a detected face
  std::vector<std::size_t> region_switches;
  std::size_t straddling_pos_windows = 0;
  std::optional<double> snr_before_db;
  std::optional<double> snr_after_db;
  double welch_hr_bpm = 0.0;
  double csd_hr_bpm = 0.0;
  std::string csd_pairing;  // "forehead" or "lagged"
  std::size_t peak_count = 0;
  std::vector<HrEstimate> rejected_windows;  // outside [42, 240] BPM

  friend bool operator==(const PipelineDiagnostics&, const PipelineDiagnostics&) = default;
};

struct HrReport {
  std::vector<HrEstimate> windows;
  double video_hr_bpm = 0.0;
  std::vector<RoiTimelineEntry> roi_timeline;
  PipelineDiagnostics diagnostics;

  friend bool operator==(const HrReport&, const HrReport&) = default;
};

/// Every intermediate signal of one run, for the psd subcommand and tests.
struct PipelineResult {
  HrReport report;
  RgbTrace trace;
  PulseSignal raw_pulse;
  FilterStages stages;
  PeakTrain peaks;
  Psd welch;
  Psd cross;
};

/// ROI selection, colour averaging, POS, filtering, peak detection and IBI
/// analysis in that order. Landmark records pair with frames by frame_index;
/// frames without a detected face are skipped and listed as gaps.
PipelineResult run_pipeline_detailed(FrameSource& frames,
                                     std::span<const LandmarkSet> landmarks,
                                     const PipelineConfig& cfg);

HrReport run_pipeline(FrameSource& frames, std::span<const LandmarkSet> landmarks,
                      const PipelineConfig& cfg);

/// Band SNR in dB: power within 0.1 Hz of f0 and 2 f0 against the rest of the
/// band. Empty when either part has no power.
std::optional<double> snr_db(const PulseSignal& signal, double f0_hz, double lo_hz,
                             double hi_hz);

nlohmann::json to_json(const HrReport& report);
HrReport report_from_json(const nlohmann::json& j);

}  // namespace rppg
