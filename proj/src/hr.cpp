#include "rppg/hr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "rppg/error.hpp"
#include "rppg/fft.hpp"

namespace rppg {

std::string_view to_string(HrMethod m) noexcept {
  switch (m) {
    case HrMethod::IBI: return "ibi";
    case HrMethod::WelchPeak: return "welch_peak";
    case HrMethod::CsdPeak: return "csd_peak";
  }
  return "ibi";
}

namespace {

struct Candidate {
  std::size_t index;
  double position;  // fractional sample position
  double value;
};

double population_sd(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  const double m = s / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

// Height above the higher of the two lowest points reached before the signal
// climbs above the peak on either side (or hits an edge).
double prominence(const std::vector<double>& x, std::size_t left_edge,
                  std::size_t right_edge, double v) {
  double left_min = v;
  for (std::size_t i = left_edge; i-- > 0;) {
    if (x[i] > v) break;
    left_min = std::min(left_min, x[i]);
  }
  double right_min = v;
  for (std::size_t i = right_edge + 1; i < x.size(); ++i) {
    if (x[i] > v) break;
    right_min = std::min(right_min, x[i]);
  }
  return v - std::max(left_min, right_min);
}

std::vector<fft::Complex> averaged_cross_spectrum(const PulseSignal& x,
                                                  const PulseSignal& y,
                                                  double segment_s, double overlap,
                                                  std::size_t& seg_len) {
  if (x.size() != y.size() || x.fps != y.fps) {
    throw Error(ErrorKind::Alignment, "cross spectrum inputs differ in length or fps");
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw Error(ErrorKind::Config, "overlap must lie in [0, 1)");
  }
  const auto len = static_cast<std::size_t>(std::lround(segment_s * x.fps));
  if (len < 2) throw Error(ErrorKind::Config, "segment shorter than 2 samples");
  if (len > x.size()) {
    throw Error(ErrorKind::InsufficientData,
                "segment of " + std::to_string(len) + " samples exceeds signal of " +
                    std::to_string(x.size()));
  }
  const std::size_t step = std::max<std::size_t>(
      1, len - static_cast<std::size_t>(std::lround(overlap * static_cast<double>(len))));

  std::vector<double> win(len);
  double win_energy = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    win[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(len));
    win_energy += win[i] * win[i];
  }

  fft::RealFft plan(len);
  std::vector<fft::Complex> acc(plan.bins(), {0.0, 0.0});
  std::vector<double> seg(len);
  auto prepare = [&](const std::vector<double>& src, std::size_t start) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += src[start + i];
    const double m = s / static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) seg[i] = (src[start + i] - m) * win[i];
    return plan.forward(seg);
  };
  std::size_t count = 0;
  for (std::size_t start = 0; start + len <= x.size(); start += step, ++count) {
    const auto fx = prepare(x.values, start);
    const auto fy = &x == &y ? fx : prepare(y.values, start);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::conj(fx[k]) * fy[k];
  }
  const double scale = 1.0 / (x.fps * win_energy * static_cast<double>(count));
  for (std::size_t k = 0; k < acc.size(); ++k) {
    const bool nyquist = len % 2 == 0 && k == acc.size() - 1;
    acc[k] *= (k == 0 || nyquist) ? scale : 2.0 * scale;
  }
  seg_len = len;
  return acc;
}

Psd make_psd(const PulseSignal& x, std::size_t len, PsdMethod method) {
  Psd psd;
  psd.method = method;
  psd.span_start = x.t0;
  psd.span_end = x.t0 + x.duration();
  psd.freqs.resize(len / 2 + 1);
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    psd.freqs[k] = fft::bin_frequency(k, len, x.fps);
  }
  return psd;
}

}  // namespace

PeakTrain detect_peaks(const PulseSignal& signal, const PeakConfig& cfg) {
  const auto& x = signal.values;
  if (x.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "peak detection needs >= 3 samples");
  }
  PeakTrain train;
  train.origin = signal.t0;
  const double sd = population_sd(x);
  if (sd == 0.0) return train;
  const double min_prom = cfg.prominence_factor * sd;

  std::vector<Candidate> cands;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < x.size() && x[j + 1] == x[i]) ++j;
    if (j + 1 < x.size() && x[j + 1] < x[i]) {
      double pos = 0.5 * static_cast<double>(i + j);
      if (i == j) {
        const double a = x[i - 1], b = x[i], c = x[i + 1];
        const double denom = a - 2.0 * b + c;
        if (denom < 0.0) pos += std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
      }
      if (prominence(x, i, j, x[i]) >= min_prom) {
        cands.push_back({(i + j) / 2, pos, x[i]});
      }
    }
    i = j;
  }

  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  const double min_gap = cfg.min_separation_s * signal.fps;
  std::vector<Candidate> kept;
  for (const auto& c : cands) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](const Candidate& k) {
      return std::abs(k.position - c.position) < min_gap;
    });
    if (clear) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Candidate& a, const Candidate& b) { return a.position < b.position; });
  for (const auto& k : kept) {
    train.peak_indices.push_back(k.index);
    train.peak_times.push_back(signal.t0 + k.position / signal.fps);
  }
  return train;
}

std::vector<HrEstimate> ibi_hr(const PeakTrain& peaks, double window_s) {
  if (!(window_s > 0.0)) throw Error(ErrorKind::Config, "HR window must be > 0");
  if (peaks.size() < 2) {
    throw Error(ErrorKind::InsufficientPeaks,
                "need at least 2 peaks, got " + std::to_string(peaks.size()));
  }
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<long long, Acc> windows;
  for (std::size_t n = 1; n < peaks.size(); ++n) {
    const double ibi = peaks.peak_times[n] - peaks.peak_times[n - 1];
    const auto w = static_cast<long long>(
        std::floor((peaks.peak_times[n] - peaks.origin) / window_s));
    windows[w].sum += ibi;
    windows[w].n += 1;
  }
  std::vector<HrEstimate> out;
  for (const auto& [w, acc] : windows) {
    HrEstimate e;
    e.window_start = peaks.origin + static_cast<double>(w) * window_s;
    e.window_end = e.window_start + window_s;
    e.hr_bpm = 60.0 / (acc.sum / static_cast<double>(acc.n));
    e.n_ibis = acc.n;
    e.method = HrMethod::IBI;
    out.push_back(e);
  }
  return out;
}

Psd welch_psd(const PulseSignal& signal, double segment_s, double overlap) {
  std::size_t len = 0;
  const auto cross = averaged_cross_spectrum(signal, signal, segment_s, overlap, len);
  Psd psd = make_psd(signal, len, PsdMethod::Welch);
  psd.power.resize(cross.size());
  for (std::size_t k = 0; k < cross.size(); ++k) psd.power[k] = cross[k].real();
  return psd;
}

Psd csd(const PulseSignal& x, const PulseSignal& y, double segment_s, double overlap) {
  std::size_t len = 0;
  const auto cross = averaged_cross_spectrum(x, y, segment_s, overlap, len);
  Psd psd = make_psd(x, len, PsdMethod::CSD);
  psd.power.resize(cross.size());
  for (std::size_t k = 0; k < cross.size(); ++k) psd.power[k] = std::abs(cross[k]);
  return psd;
}

HrEstimate spectral_hr(const Psd& psd, std::pair<double, double> band) {
  std::size_t best = psd.freqs.size();
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    const double f = psd.freqs[k];
    if (f < band.first || f > band.second) continue;
    if (best == psd.freqs.size() || psd.power[k] > psd.power[best]) best = k;
  }
  if (best == psd.freqs.size()) {
    throw Error(ErrorKind::Config, "no spectral bins inside the HR band");
  }
  HrEstimate e;
  e.window_start = psd.span_start;
  e.window_end = psd.span_end;
  e.hr_bpm = 60.0 * psd.freqs[best];
  e.method = psd.method == PsdMethod::Welch ? HrMethod::WelchPeak : HrMethod::CsdPeak;
  return e;
}

double mean_hr(const std::vector<HrEstimate>& estimates) {
  if (estimates.empty()) {
    throw Error(ErrorKind::InsufficientData, "no HR estimates to average");
  }
  double s = 0.0;
  for (const auto& e : estimates) s += e.hr_bpm;
  return s / static_cast<double>(estimates.size());
}

}  // namespace rppg
