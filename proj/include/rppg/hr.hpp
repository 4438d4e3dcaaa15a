#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "rppg/pos.hpp"

namespace rppg {

struct PeakTrain {
  std::vector<double> peak_times;         // seconds, strictly increasing
  std::vector<std::size_t> peak_indices;  // sample indices
  double origin = 0.0;                    // start time of the source signal

  std::size_t size() const noexcept { return peak_times.size(); }
};

enum class HrMethod { IBI, WelchPeak, CsdPeak };
std::string_view to_string(HrMethod m) noexcept;

struct HrEstimate {
  double window_start = 0.0;
  double window_end = 0.0;
  double hr_bpm = 0.0;
  std::size_t n_ibis = 0;
  HrMethod method = HrMethod::IBI;

  friend bool operator==(const HrEstimate&, const HrEstimate&) = default;
};

enum class PsdMethod { Welch, CSD };

struct Psd {
  std::vector<double> freqs;  // Hz, ascending
  std::vector<double> power;  // Welch power, or CSD magnitude
  PsdMethod method = PsdMethod::Welch;
  double span_start = 0.0;
  double span_end = 0.0;
};

struct PeakConfig {
  double min_separation_s = 0.25;
  double prominence_factor = 0.5;
};

/// Local maxima (flat tops count once, at their middle) whose prominence is
/// at least prominence_factor * SD(signal), thinned highest-first so that no
/// two survivors are closer than min_separation. Peak times are refined by a
/// three-point parabola through the maximum.
PeakTrain detect_peaks(const PulseSignal& signal, const PeakConfig& cfg = {});

/// HR per tumbling window of `window_s` seconds starting at peaks.origin:
/// 60 / mean(IBIs whose later peak falls in the window). Empty windows are
/// omitted.
std::vector<HrEstimate> ibi_hr(const PeakTrain& peaks, double window_s);

/// One-sided averaged periodogram over Hann-windowed, mean-removed segments
/// (density scaling: sum(power) * df equals the signal variance).
Psd welch_psd(const PulseSignal& signal, double segment_s, double overlap = 0.5);

/// Magnitude of the Welch-averaged cross spectrum; csd(x, x) equals
/// welch_psd(x).
Psd csd(const PulseSignal& x, const PulseSignal& y, double segment_s,
        double overlap = 0.5);

/// 60 x the in-band argmax frequency; ties resolve to the lowest frequency.
HrEstimate spectral_hr(const Psd& psd, std::pair<double, double> band);

/// Mean of window estimates.
double mean_hr(const std::vector<HrEstimate>& estimates);

}  // namespace rppg
