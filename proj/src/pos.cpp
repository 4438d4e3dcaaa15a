#include "rppg/pos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rppg/error.hpp"

namespace rppg {

namespace {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_sd(std::span<const double> x) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

}  // namespace

std::vector<std::size_t> find_region_switches(std::span<const RgbSample> samples) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].region != samples[i - 1].region) out.push_back(i);
  }
  return out;
}

RgbWindow to_window(std::span<const RgbSample> samples) {
  RgbWindow w;
  for (auto& c : w.channels) c.reserve(samples.size());
  for (const auto& s : samples) {
    w.channels[0].push_back(s.r);
    w.channels[1].push_back(s.g);
    w.channels[2].push_back(s.b);
  }
  return w;
}

RgbWindow temporal_normalize(const RgbWindow& window) {
  const std::size_t n = window.size();
  if (n < 2) {
    throw Error(ErrorKind::DegenerateWindow, "window needs at least 2 samples");
  }
  RgbWindow out;
  for (std::size_t c = 0; c < 3; ++c) {
    const auto& ch = window.channels[c];
    if (ch.size() != n) {
      throw Error(ErrorKind::DegenerateWindow, "channel lengths differ");
    }
    const double m = mean_of(ch);
    if (!(m > 0.0)) {
      throw Error(ErrorKind::DegenerateWindow,
                  "channel " + std::to_string(c) + " has non-positive mean");
    }
    out.channels[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) out.channels[c][i] = ch[i] / m;
  }
  return out;
}

std::vector<double> pos_project(const RgbWindow& normalized) {
  const std::size_t n = normalized.size();
  const auto& r = normalized.channels[0];
  const auto& g = normalized.channels[1];
  const auto& b = normalized.channels[2];
  std::vector<double> s1(n), s2(n);
  for (std::size_t i = 0; i < n; ++i) {
    s1[i] = g[i] - b[i];
    s2[i] = g[i] + b[i] - 2.0 * r[i];
  }
  const double sd2 = population_sd(s2);
  const double alpha = sd2 > 0.0 ? population_sd(s1) / sd2 : 0.0;
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = s1[i] + alpha * s2[i];
  const double m = mean_of(h);
  for (auto& v : h) v -= m;
  return h;
}

PulseSignal pos_sliding(const RgbTrace& trace, std::size_t window_len) {
  const std::size_t n = trace.size();
  if (window_len < 2) {
    throw Error(ErrorKind::Config, "pos window must be at least 2 samples");
  }
  if (n < window_len) {
    throw Error(ErrorKind::InsufficientData,
                "trace has " + std::to_string(n) + " samples, pos window needs " +
                    std::to_string(window_len));
  }
  const RgbWindow full = to_window(trace.samples);
  std::vector<double> acc(n, 0.0);
  std::vector<double> count(n, 0.0);
  RgbWindow win;
  for (auto& c : win.channels) c.resize(window_len);
  for (std::size_t start = 0; start + window_len <= n; ++start) {
    for (std::size_t c = 0; c < 3; ++c) {
      std::copy_n(full.channels[c].begin() + static_cast<std::ptrdiff_t>(start),
                  window_len, win.channels[c].begin());
    }
    const auto chunk = pos_project(temporal_normalize(win));
    for (std::size_t i = 0; i < window_len; ++i) {
      acc[start + i] += chunk[i];
      count[start + i] += 1.0;
    }
  }
  PulseSignal out;
  out.fps = trace.fps;
  out.t0 = trace.samples.front().timestamp;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = acc[i] / count[i];
  const double m = mean_of(out.values);
  for (auto& v : out.values) v -= m;
  return out;
}

std::vector<std::size_t> straddling_windows(const RgbTrace& trace,
                                            std::size_t window_len) {
  std::vector<std::size_t> out;
  if (trace.size() < window_len || window_len == 0) return out;
  for (std::size_t start = 0; start + window_len <= trace.size(); ++start) {
    for (auto sw : trace.region_switches) {
      if (sw > start && sw < start + window_len) {
        out.push_back(start);
        break;
      }
    }
  }
  return out;
}

}  // namespace rppg
