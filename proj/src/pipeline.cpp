#include "rppg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rppg/error.hpp"
#include "rppg/fft.hpp"
#include "rppg/roi.hpp"

namespace rppg {

using nlohmann::json;

namespace {

PulseSignal lagged_copy(const PulseSignal& x, bool drop_first) {
  PulseSignal out;
  out.fps = x.fps;
  out.t0 = x.t0;
  if (drop_first) {
    out.values.assign(x.values.begin() + 1, x.values.end());
  } else {
    out.values.assign(x.values.begin(), x.values.end() - 1);
  }
  return out;
}

json estimate_json(const HrEstimate& e) {
  return {{"window_start", e.window_start}, {"window_end", e.window_end},
          {"hr_bpm", e.hr_bpm},             {"n_ibis", e.n_ibis},
          {"method", std::string(to_string(e.method))}};
}

HrEstimate estimate_from_json(const json& j) {
  HrEstimate e;
  e.window_start = j.at("window_start").get<double>();
  e.window_end = j.at("window_end").get<double>();
  e.hr_bpm = j.at("hr_bpm").get<double>();
  e.n_ibis = j.at("n_ibis").get<std::size_t>();
  const auto m = j.at("method").get<std::string>();
  if (m == "ibi") e.method = HrMethod::IBI;
  else if (m == "welch_peak") e.method = HrMethod::WelchPeak;
  else if (m == "csd_peak") e.method = HrMethod::CsdPeak;
  else throw Error(ErrorKind::Parse, "unknown HR method '" + m + "'");
  return e;
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::optional<double> snr_db(const PulseSignal& signal, double f0_hz, double lo_hz,
                             double hi_hz) {
  const std::size_t n = signal.size();
  if (n < 2) return std::nullopt;
  double mean = 0.0;
  for (double v : signal.values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = signal.values[i] - mean;
  const auto spec = fft::rfft(x);
  double sig = 0.0, noise = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    const double f = fft::bin_frequency(k, n, signal.fps);
    if (f < lo_hz || f > hi_hz) continue;
    const bool near = std::abs(f - f0_hz) <= 0.1 || std::abs(f - 2.0 * f0_hz) <= 0.1;
    (near ? sig : noise) += std::norm(spec[k]);
  }
  if (!(sig > 0.0) || !(noise > 0.0)) return std::nullopt;
  return 10.0 * std::log10(sig / noise);
}

PipelineResult run_pipeline_detailed(FrameSource& frames,
                                     std::span<const LandmarkSet> landmarks,
                                     const PipelineConfig& cfg) {
  const double fps = frames.fps();
  cfg.validate(fps);
  const int w = frames.width();
  const int h = frames.height();

  std::unordered_map<std::int64_t, const LandmarkSet*> by_frame;
  for (const auto& lms : landmarks) {
    if (!by_frame.emplace(lms.frame_index, &lms).second) {
      throw Error(ErrorKind::Alignment,
                  "duplicate landmark record for frame " + std::to_string(lms.frame_index));
    }
  }

  PipelineResult res;
  auto& report = res.report;
  auto& diag = report.diagnostics;
  res.trace.fps = fps;

  RgbTrace forehead;
  forehead.fps = fps;
  bool forehead_complete = true;

  std::int64_t index = 0;
  while (auto frame = frames.next()) {
    const double t = static_cast<double>(index) / fps;
    const auto it = by_frame.find(index);
    if (it == by_frame.end() || !it->second->detected) {
      diag.gaps.push_back(index);
      ++index;
      continue;
    }
    const LandmarkSet& lms = *it->second;
    const auto yaw = estimate_yaw(lms);
    const auto sel = select_roi(lms, yaw, w, h, cfg.roi);
    res.trace.samples.push_back(crop_mean_rgb(*frame, sel, t));
    report.roi_timeline.push_back({index, sel.region});

    if (forehead_complete) {
      RoiSelection fh;
      fh.region = Region::Forehead;
      fh.center_landmark = kForeheadLandmark;
      fh.rect = roi_rect(lms.points[kForeheadLandmark], w, h, cfg.roi.roi_size);
      if (fh.rect.inside(w, h)) {
        forehead.samples.push_back(crop_mean_rgb(*frame, fh, t));
      } else {
        forehead_complete = false;
      }
    }
    ++index;
  }
  for (const auto& lms : landmarks) {
    if (lms.frame_index < 0 || lms.frame_index >= index) {
      throw Error(ErrorKind::Alignment, "landmark record for frame " +
                                            std::to_string(lms.frame_index) +
                                            " has no matching frame");
    }
  }
  diag.frames_total = static_cast<std::size_t>(index);
  diag.frames_detected = res.trace.size();

  const std::size_t needed =
      std::max(cfg.pos_window_frames(fps), cfg.hr_window_frames(fps));
  if (res.trace.size() < needed) {
    throw Error(ErrorKind::InsufficientData,
                std::to_string(res.trace.size()) + " detected-face frames of " +
                    std::to_string(diag.frames_total) + " total; need at least " +
                    std::to_string(needed));
  }

  res.trace.region_switches = find_region_switches(res.trace.samples);
  diag.region_switches = res.trace.region_switches;
  const std::size_t pos_len = cfg.pos_window_frames(fps);
  diag.straddling_pos_windows = straddling_windows(res.trace, pos_len).size();

  res.raw_pulse = pos_sliding(res.trace, pos_len);
  res.stages = apply_filter_stages(res.raw_pulse, res.trace, cfg.filter);
  const PulseSignal& filtered = res.stages.smoothed;

  res.peaks = detect_peaks(filtered, cfg.peaks);
  diag.peak_count = res.peaks.size();
  for (const auto& e : ibi_hr(res.peaks, cfg.hr_window_s)) {
    if (e.hr_bpm >= 42.0 && e.hr_bpm <= 240.0) {
      report.windows.push_back(e);
    } else {
      diag.rejected_windows.push_back(e);
    }
  }
  if (report.windows.empty()) {
    throw Error(ErrorKind::InsufficientData, "no HR window produced an in-band estimate");
  }
  report.video_hr_bpm = mean_hr(report.windows);

  const std::pair<double, double> band{cfg.filter.band_lo_hz, cfg.filter.band_hi_hz};
  const double segment = std::min(cfg.welch_segment_s, filtered.duration());
  res.welch = welch_psd(filtered, segment);
  diag.welch_hr_bpm = spectral_hr(res.welch, band).hr_bpm;

  const bool mixed = !res.trace.region_switches.empty() ||
                     (!res.trace.samples.empty() &&
                      res.trace.samples.front().region != Region::Forehead);
  if (forehead_complete && mixed && forehead.size() == res.trace.size()) {
    const auto fh_pulse = pos_sliding(forehead, pos_len);
    const auto fh_filtered = apply_filter_chain(fh_pulse, forehead, cfg.filter);
    res.cross = csd(filtered, fh_filtered, segment);
    diag.csd_pairing = "forehead";
  } else {
    const auto a = lagged_copy(filtered, true);
    const auto b = lagged_copy(filtered, false);
    res.cross = csd(a, b, std::min(segment, a.duration()));
    diag.csd_pairing = "lagged";
  }
  diag.csd_hr_bpm = spectral_hr(res.cross, band).hr_bpm;

  const double f0 = diag.welch_hr_bpm / 60.0;
  diag.snr_before_db = snr_db(res.raw_pulse, f0, band.first, band.second);
  diag.snr_after_db = snr_db(filtered, f0, band.first, band.second);
  return res;
}

HrReport run_pipeline(FrameSource& frames, std::span<const LandmarkSet> landmarks,
                      const PipelineConfig& cfg) {
  return run_pipeline_detailed(frames, landmarks, cfg).report;
}

json to_json(const HrReport& report) {
  json windows = json::array();
  for (const auto& e : report.windows) windows.push_back(estimate_json(e));
  json timeline = json::array();
  for (const auto& t : report.roi_timeline) {
    timeline.push_back({{"frame_index", t.frame_index},
                        {"region", std::string(to_string(t.region))}});
  }
  const auto& d = report.diagnostics;
  json rejected = json::array();
  for (const auto& e : d.rejected_windows) rejected.push_back(estimate_json(e));
  json diag{{"frames_total", d.frames_total},
            {"frames_detected", d.frames_detected},
            {"gaps", d.gaps},
            {"region_switches", d.region_switches},
            {"straddling_pos_windows", d.straddling_pos_windows},
            {"snr_before_db", optional_json(d.snr_before_db)},
            {"snr_after_db", optional_json(d.snr_after_db)},
            {"welch_hr_bpm", d.welch_hr_bpm},
            {"csd_hr_bpm", d.csd_hr_bpm},
            {"csd_pairing", d.csd_pairing},
            {"peak_count", d.peak_count},
            {"rejected_windows", rejected}};
  return {{"video_hr_bpm", report.video_hr_bpm},
          {"windows", windows},
          {"roi_timeline", timeline},
          {"diagnostics", diag}};
}

HrReport report_from_json(const json& j) {
  HrReport r;
  try {
    r.video_hr_bpm = j.at("video_hr_bpm").get<double>();
    for (const auto& e : j.at("windows")) r.windows.push_back(estimate_from_json(e));
    for (const auto& t : j.at("roi_timeline")) {
      const auto name = t.at("region").get<std::string>();
      const auto region = region_from_string(name);
      if (!region) throw Error(ErrorKind::Parse, "unknown region '" + name + "'");
      r.roi_timeline.push_back({t.at("frame_index").get<std::int64_t>(), *region});
    }
    const auto& d = j.at("diagnostics");
    auto& out = r.diagnostics;
    out.frames_total = d.at("frames_total").get<std::size_t>();
    out.frames_detected = d.at("frames_detected").get<std::size_t>();
    out.gaps = d.at("gaps").get<std::vector<std::int64_t>>();
    out.region_switches = d.at("region_switches").get<std::vector<std::size_t>>();
    out.straddling_pos_windows = d.at("straddling_pos_windows").get<std::size_t>();
    out.snr_before_db = optional_from(d.at("snr_before_db"));
    out.snr_after_db = optional_from(d.at("snr_after_db"));
    out.welch_hr_bpm = d.at("welch_hr_bpm").get<double>();
    out.csd_hr_bpm = d.at("csd_hr_bpm").get<double>();
    out.csd_pairing = d.at("csd_pairing").get<std::string>();
    out.peak_count = d.at("peak_count").get<std::size_t>();
    for (const auto& e : d.at("rejected_windows")) {
      out.rejected_windows.push_back(estimate_from_json(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed HR report: ") + e.what());
  }
  return r;
}

}  // namespace rppg
