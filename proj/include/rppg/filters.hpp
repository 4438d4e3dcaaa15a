#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "rppg/fft.hpp"
#include "rppg/pos.hpp"

namespace rppg {

struct SpectralWeights {
  std::vector<double> weights;  // one per rfft bin
  double bin_hz = 0.0;
};

struct FilterConfig {
  double asf_delta = 0.002;
  std::array<double, 3> pulse_direction = default_pulse_direction();
  double band_lo_hz = 0.7;
  double band_hi_hz = 4.0;
  std::optional<int> ma_points;  // defaults to round(fps / 6)

  static std::array<double, 3> default_pulse_direction();
  int effective_ma_points(double fps) const;
  /// Throws Config unless 0 < lo < hi < fps/2, M >= 1 and the pulse
  /// direction is a unit vector.
  void validate(double fps) const;
};

/// Spectrum of the mean-normalized RGB trace, one rfft row per channel.
struct RgbSpectrum {
  std::array<std::vector<fft::Complex>, 3> channels;
  double bin_hz = 0.0;

  std::size_t bins() const noexcept { return channels[0].size(); }
};

RgbSpectrum rgb_spectrum(const RgbTrace& trace);

/// y[i] = (1/M) * sum_{j=0}^{M-1} x[i+j]; output has len(x) - M + 1 samples.
std::vector<double> moving_average(std::span<const double> x, int points);

/// min(1, delta / a_R(f)) with a_R the DC-normalized red amplitude; DC gets 0.
SpectralWeights asf_weights(const RgbSpectrum& spectrum, double delta);

/// Fraction of each bin's RGB energy along the pulse direction; DC gets 0.
SpectralWeights cdf_weights(const RgbSpectrum& spectrum,
                            const std::array<double, 3>& pulse_direction);

/// 1 inside [lo, hi] Hz, 0 elsewhere.
SpectralWeights band_mask(std::size_t bins, double bin_hz, double lo_hz,
                          double hi_hz);

/// Intermediate signals of the chain, each re-centred to zero mean.
struct FilterStages {
  PulseSignal raw;
  PulseSignal asf;
  PulseSignal cdf;
  PulseSignal smoothed;
};

FilterStages apply_filter_stages(const PulseSignal& pulse, const RgbTrace& trace,
                                 const FilterConfig& cfg);

/// ASF x CDF x band mask in one spectral pass, then the moving average.
PulseSignal apply_filter_chain(const PulseSignal& pulse, const RgbTrace& trace,
                               const FilterConfig& cfg);

}  // namespace rppg
