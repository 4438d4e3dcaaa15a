#include "rppg/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rppg/error.hpp"

namespace rppg {

namespace {

void center(std::vector<double>& x) {
  if (x.empty()) return;
  double s = 0.0;
  for (double v : x) s += v;
  const double m = s / static_cast<double>(x.size());
  for (auto& v : x) v -= m;
}

PulseSignal like(const PulseSignal& ref, std::vector<double> values) {
  PulseSignal out;
  out.fps = ref.fps;
  out.t0 = ref.t0;
  out.values = std::move(values);
  return out;
}

}  // namespace

std::array<double, 3> FilterConfig::default_pulse_direction() {
  const double r = 0.33, g = 0.77, b = 0.53;
  const double n = std::sqrt(r * r + g * g + b * b);
  return {r / n, g / n, b / n};
}

int FilterConfig::effective_ma_points(double fps) const {
  if (ma_points) return *ma_points;
  return std::max(1, static_cast<int>(std::lround(fps / 6.0)));
}

void FilterConfig::validate(double fps) const {
  if (!(band_lo_hz > 0.0 && band_lo_hz < band_hi_hz && band_hi_hz < fps / 2.0)) {
    throw Error(ErrorKind::Config,
                "band must satisfy 0 < lo < hi < fps/2 (fps " +
                    std::to_string(fps) + ")");
  }
  if (effective_ma_points(fps) < 1) {
    throw Error(ErrorKind::Config, "ma_points must be >= 1");
  }
  if (!(asf_delta > 0.0)) throw Error(ErrorKind::Config, "asf_delta must be > 0");
  const auto& u = pulse_direction;
  const double norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  if (std::abs(norm - 1.0) > 1e-9) {
    throw Error(ErrorKind::Config, "pulse_direction must have unit norm");
  }
}

RgbSpectrum rgb_spectrum(const RgbTrace& trace) {
  const std::size_t n = trace.size();
  if (n < 2) throw Error(ErrorKind::InsufficientData, "trace too short for spectrum");
  const RgbWindow w = to_window(trace.samples);
  RgbSpectrum out;
  out.bin_hz = trace.fps / static_cast<double>(n);
  fft::RealFft plan(n);
  for (std::size_t c = 0; c < 3; ++c) {
    double s = 0.0;
    for (double v : w.channels[c]) s += v;
    const double m = s / static_cast<double>(n);
    if (!(m > 0.0)) {
      throw Error(ErrorKind::DegenerateSpectrum,
                  "channel " + std::to_string(c) + " has zero mean");
    }
    std::vector<double> norm(n);
    for (std::size_t i = 0; i < n; ++i) norm[i] = w.channels[c][i] / m;
    out.channels[c] = plan.forward(norm);
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> x, int points) {
  if (points < 1) throw Error(ErrorKind::Config, "moving average needs M >= 1");
  const auto m = static_cast<std::size_t>(points);
  if (m > x.size()) {
    throw Error(ErrorKind::InsufficientData,
                "moving average of " + std::to_string(m) + " points over " +
                    std::to_string(x.size()) + " samples");
  }
  std::vector<double> y(x.size() - m + 1);
  // Direct evaluation per output, no running sum.
  for (std::size_t i = 0; i < y.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += x[i + j];
    y[i] = s / static_cast<double>(m);
  }
  return y;
}

SpectralWeights asf_weights(const RgbSpectrum& spectrum, double delta) {
  const auto& red = spectrum.channels[0];
  if (red.empty() || std::abs(red[0]) == 0.0) {
    throw Error(ErrorKind::DegenerateSpectrum, "red channel has zero DC");
  }
  const double dc = std::abs(red[0]);
  SpectralWeights w{std::vector<double>(red.size(), 0.0), spectrum.bin_hz};
  for (std::size_t k = 1; k < red.size(); ++k) {
    const double a = std::abs(red[k]) / dc;
    w.weights[k] = a <= delta ? 1.0 : delta / a;
  }
  return w;
}

SpectralWeights cdf_weights(const RgbSpectrum& spectrum,
                            const std::array<double, 3>& pulse_direction) {
  const std::size_t bins = spectrum.bins();
  SpectralWeights w{std::vector<double>(bins, 0.0), spectrum.bin_hz};
  for (std::size_t k = 1; k < bins; ++k) {
    fft::Complex proj{0.0, 0.0};
    double energy = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      proj += spectrum.channels[c][k] * pulse_direction[c];
      energy += std::norm(spectrum.channels[c][k]);
    }
    if (energy > 0.0) w.weights[k] = std::min(1.0, std::norm(proj) / energy);
  }
  return w;
}

SpectralWeights band_mask(std::size_t bins, double bin_hz, double lo_hz,
                          double hi_hz) {
  SpectralWeights w{std::vector<double>(bins, 0.0), bin_hz};
  for (std::size_t k = 1; k < bins; ++k) {
    const double f = static_cast<double>(k) * bin_hz;
    if (f >= lo_hz && f <= hi_hz) w.weights[k] = 1.0;
  }
  return w;
}

FilterStages apply_filter_stages(const PulseSignal& pulse, const RgbTrace& trace,
                                 const FilterConfig& cfg) {
  const std::size_t n = pulse.size();
  if (n != trace.size() || pulse.fps != trace.fps) {
    throw Error(ErrorKind::Alignment, "pulse and trace are not aligned");
  }
  cfg.validate(pulse.fps);
  const int m = cfg.effective_ma_points(pulse.fps);
  if (static_cast<std::size_t>(m) > n) {
    throw Error(ErrorKind::InsufficientData, "signal shorter than moving average");
  }

  const RgbSpectrum rgb = rgb_spectrum(trace);
  const auto asf = asf_weights(rgb, cfg.asf_delta);
  const auto cdf = cdf_weights(rgb, cfg.pulse_direction);
  const auto mask = band_mask(rgb.bins(), rgb.bin_hz, cfg.band_lo_hz, cfg.band_hi_hz);

  fft::RealFft plan(n);
  const auto spec = plan.forward(pulse.values);
  std::vector<fft::Complex> s_asf(spec.size()), s_cdf(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    s_asf[k] = spec[k] * (asf.weights[k] * mask.weights[k]);
    s_cdf[k] = s_asf[k] * cdf.weights[k];
  }

  FilterStages out;
  out.raw = pulse;
  auto asf_sig = plan.inverse(s_asf);
  center(asf_sig);
  out.asf = like(pulse, std::move(asf_sig));
  auto cdf_sig = plan.inverse(s_cdf);
  center(cdf_sig);
  out.cdf = like(pulse, cdf_sig);

  auto smooth = moving_average(cdf_sig, m);
  center(smooth);
  out.smoothed = like(pulse, std::move(smooth));
  out.smoothed.t0 = pulse.t0 + (m - 1) / (2.0 * pulse.fps);
  return out;
}

PulseSignal apply_filter_chain(const PulseSignal& pulse, const RgbTrace& trace,
                               const FilterConfig& cfg) {
  return apply_filter_stages(pulse, trace, cfg).smoothed;
}

}  // namespace rppg
