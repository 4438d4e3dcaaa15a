#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rppg/error.hpp"
#include "rppg/filters.hpp"
#include "rppg/synth.hpp"

using namespace rppg;

namespace {

RgbSpectrum spectrum_with(std::size_t bins, double dc) {
  RgbSpectrum s;
  s.bin_hz = 0.1;
  for (auto& ch : s.channels) {
    ch.assign(bins, {0.0, 0.0});
    ch[0] = {dc, 0.0};
  }
  return s;
}

// Trace whose normalized colour varies along `dir` with the given waveform,
// and the matching POS-like pulse (the waveform itself).
std::pair<RgbTrace, PulseSignal> aligned_case(const std::vector<double>& wave, double rel_amp,
                                              double fps) {
  const auto dir = FilterConfig::default_pulse_direction();
  const std::array<double, 3> base{170, 120, 100};
  RgbTrace t;
  t.fps = fps;
  for (std::size_t i = 0; i < wave.size(); ++i) {
    RgbSample s;
    s.timestamp = static_cast<double>(i) / fps;
    s.r = base[0] * (1 + rel_amp * dir[0] * wave[i]);
    s.g = base[1] * (1 + rel_amp * dir[1] * wave[i]);
    s.b = base[2] * (1 + rel_amp * dir[2] * wave[i]);
    t.samples.push_back(s);
  }
  PulseSignal p;
  p.fps = fps;
  p.values = wave;
  return {t, p};
}

}  // namespace

TEST_CASE("moving_average examples") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(moving_average(x, 1) == x);
  CHECK(moving_average(x, 2) == std::vector<double>{1.5, 2.5, 3.5});
  const std::vector<double> c(10, 3.25);
  CHECK(moving_average(c, 4) == std::vector<double>(7, 3.25));
  try {
    moving_average(x, 5);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
  CHECK_THROWS_AS(moving_average(x, 0), Error);
}

TEST_CASE("moving_average property: matches direct evaluation, linear, variance-reducing") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 5.0);
  std::uniform_int_distribution<int> len(1, 200);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> x(len(rng)), y(x.size());
    for (auto& v : x) v = n(rng);
    for (auto& v : y) v = n(rng);
    const int m = std::uniform_int_distribution<int>(1, static_cast<int>(x.size()))(rng);
    const auto got = moving_average(x, m);
    const auto want = oracle::brute_moving_average(x, m);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    std::vector<double> sum(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sum[i] = 2.0 * x[i] - y[i];
    const auto ms = moving_average(sum, m), mx = moving_average(x, m), my = moving_average(y, m);
    for (std::size_t i = 0; i < ms.size(); ++i)
      CHECK(std::abs(ms[i] - (2.0 * mx[i] - my[i])) <= 1e-10);
    if (got.size() > 1) CHECK(oracle::variance(got) <= oracle::variance(x) * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("asf_weights examples") {
  const double delta = 0.002;
  auto s = spectrum_with(5, 100.0);
  s.channels[0][1] = {0.5 * delta * 100.0, 0.0};   // below bound
  s.channels[0][2] = {0.0, delta * 100.0};         // at bound
  s.channels[0][3] = {2.0 * delta * 100.0, 0.0};   // twice the bound
  const auto w = asf_weights(s, delta);
  CHECK(w.weights[0] == 0.0);
  CHECK(w.weights[1] == 1.0);
  CHECK(w.weights[2] == 1.0);
  CHECK(w.weights[3] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w.weights[4] == 1.0);  // zero AC amplitude passes

  const auto flat = asf_weights(spectrum_with(6, 7.0), delta);
  for (std::size_t k = 1; k < 6; ++k) CHECK(flat.weights[k] == 1.0);

  try {
    asf_weights(spectrum_with(4, 0.0), delta);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSpectrum);
  }
}

TEST_CASE("cdf_weights examples") {
  const auto u = FilterConfig::default_pulse_direction();
  auto s = spectrum_with(4, 1.0);
  const fft::Complex z{0.3, -0.7};
  for (int c = 0; c < 3; ++c) s.channels[c][1] = z * u[c];  // parallel
  // orthogonal to u: u x e1 direction
  const std::array<double, 3> orth{0.0, u[2], -u[1]};
  for (int c = 0; c < 3; ++c) s.channels[c][2] = fft::Complex{1.5, 0.2} * orth[c];
  const auto w = cdf_weights(s, u);
  CHECK(w.weights[0] == 0.0);
  CHECK(w.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(w.weights[2]) <= 1e-15);
  CHECK(w.weights[3] == 0.0);  // empty bin

  // 45 degrees in the R-G plane: <C, e_R>^2 / |C|^2 = 1/2
  auto toy = spectrum_with(2, 1.0);
  toy.channels[0][1] = {1.0, 0.0};
  toy.channels[1][1] = {1.0, 0.0};
  CHECK(cdf_weights(toy, {1.0, 0.0, 0.0}).weights[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("spectral weights property: all weights in [0, 1]") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    RgbTrace t;
    t.fps = 30.0;
    for (int i = 0; i < 128; ++i) {
      RgbSample s;
      s.r = 150 + 5 * n(rng);
      s.g = 110 + 5 * n(rng);
      s.b = 90 + 5 * n(rng);
      t.samples.push_back(s);
    }
    const auto spec = rgb_spectrum(t);
    for (const auto& w : {asf_weights(spec, 0.002), cdf_weights(spec, FilterConfig::default_pulse_direction()),
                          band_mask(spec.bins(), spec.bin_hz, 0.7, 4.0)}) {
      CHECK(w.weights[0] == 0.0);
      for (double v : w.weights) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
}

TEST_CASE("filter chain: aligned in-band sinusoid survives up to the moving-average response") {
  const double fps = 30.0;
  const std::size_t n = 600;  // 20 s -> 0.05 Hz bins
  const double f = 1.5;
  const auto wave = oracle::tone(f, 1.0, fps, n);
  const auto [trace, pulse] = aligned_case(wave, 0.003, fps);  // a_R = 0.0015*|u_R| < delta
  FilterConfig cfg;
  const auto out = apply_filter_chain(pulse, trace, cfg);
  const int m = cfg.effective_ma_points(fps);
  CHECK(m == 5);
  CHECK(out.size() == n - m + 1);
  const double expected = oracle::rms(wave) * oracle::ma_gain(f, m, fps);
  CHECK(oracle::rms(out.values) / expected >= 0.99);
  CHECK(oracle::dominant_frequency(out.values, fps) == doctest::Approx(f).epsilon(0.02));
}

TEST_CASE("filter chain: out-of-band tone is removed") {
  const double fps = 30.0;
  const auto wave = oracle::tone(6.0, 1.0, fps, 300);
  const auto [trace, pulse] = aligned_case(wave, 0.002, fps);
  const auto out = apply_filter_chain(pulse, trace, FilterConfig{});
  CHECK(oracle::rms(out.values) <= 1e-6 * oracle::rms(wave));
}

TEST_CASE("filter chain property: noiseless aligned tone keeps its bin") {
  const double fps = 30.0;
  const std::size_t n = 300;
  for (int k = 8; k <= 38; k += 3) {  // 0.8 .. 3.8 Hz
    const double f = k * fps / n;
    const auto wave = oracle::tone(f, 1.0, fps, n, 0.3);
    const auto [trace, pulse] = aligned_case(wave, 0.002, fps);
    FilterConfig cfg;
    cfg.ma_points = 1;  // keep length n so bins line up
    const auto out = apply_filter_chain(pulse, trace, cfg);
    CHECK(oracle::dominant_frequency(out.values, fps) == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("filter chain: specular transient does not move the pulse peak") {
  SynthConfig sc;
  sc.hr_bpm = 78.0;
  sc.duration = 20.0;
  sc.seed = 3;
  sc.noise_sd = 0.05;
  sc.specular_events = {{7.0, 0.6, 25.0}};
  const auto st = synth_trace(sc);
  const auto pulse = pos_sliding(st.trace, 48);
  const auto out = apply_filter_chain(pulse, st.trace, FilterConfig{});
  const double bin = sc.fps / static_cast<double>(out.size());
  CHECK(std::abs(oracle::dominant_frequency(out.values, sc.fps) - sc.hr_bpm / 60.0) <= bin);
}

TEST_CASE("filter config validation") {
  FilterConfig cfg;
  CHECK_NOTHROW(cfg.validate(30.0));
  cfg.band_hi_hz = 16.0;
  CHECK_THROWS_AS(cfg.validate(30.0), Error);
  cfg = {};
  cfg.ma_points = 0;
  CHECK_THROWS_AS(cfg.validate(30.0), Error);
  cfg = {};
  cfg.pulse_direction = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(cfg.validate(30.0), Error);
  CHECK(FilterConfig{}.effective_ma_points(25.0) == 4);
}
