#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rppg/roi.hpp"

namespace rppg {

struct RgbTrace {
  std::vector<RgbSample> samples;
  double fps = 30.0;
  std::vector<std::size_t> region_switches;  // sample indices

  std::size_t size() const noexcept { return samples.size(); }
};

/// Records a switch index wherever the region differs from the previous
/// sample.
std::vector<std::size_t> find_region_switches(std::span<const RgbSample> samples);

struct PulseSignal {
  std::vector<double> values;
  double fps = 30.0;
  double t0 = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  double duration() const noexcept { return values.size() / fps; }
};

/// Three channel rows of equal length.
struct RgbWindow {
  std::array<std::vector<double>, 3> channels;

  std::size_t size() const noexcept { return channels[0].size(); }
};

RgbWindow to_window(std::span<const RgbSample> samples);

/// Divides each channel by its own mean over the window.
RgbWindow temporal_normalize(const RgbWindow& window);

/// Projection onto the plane orthogonal to the skin tone: S1 = G - B and
/// S2 = G + B - 2R, combined as S1 + (sd(S1)/sd(S2)) * S2 (alpha = 0 when
/// sd(S2) = 0), then mean-centred.
std::vector<double> pos_project(const RgbWindow& normalized);

/// Stride-1 overlap-add of pos_project over every window of `window_len`
/// samples, divided by the per-sample overlap count and re-centred.
PulseSignal pos_sliding(const RgbTrace& trace, std::size_t window_len);

/// Windows [start, start + window_len) that contain a region switch.
std::vector<std::size_t> straddling_windows(const RgbTrace& trace,
                                            std::size_t window_len);

}  // namespace rppg
