#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rppg/error.hpp"
#include "rppg/frame.hpp"
#include "rppg/hr.hpp"
#include "rppg/roi.hpp"
#include "rppg/synth.hpp"

using namespace rppg;

namespace {

SynthConfig quiet(double hr = 72.0, double duration = 10.0) {
  SynthConfig cfg;
  cfg.hr_bpm = hr;
  cfg.duration = duration;
  cfg.seed = 1;
  return cfg;
}

double p_of(double hr, double t) {
  const double w = 2.0 * std::numbers::pi * hr / 60.0;
  return std::sin(w * t) + 0.3 * std::sin(2.0 * w * t);
}

}  // namespace

TEST_CASE("synth: all modulations off gives a constant trace") {
  auto cfg = quiet();
  cfg.pulse_rel_amp = 0.0;
  const auto st = synth_trace(cfg);
  REQUIRE(st.trace.size() == 300);
  for (const auto& s : st.trace.samples) {
    CHECK(s.r == 170.0);
    CHECK(s.g == 120.0);
    CHECK(s.b == 100.0);
  }
}

TEST_CASE("synth: channel deviations follow the pulse direction") {
  auto cfg = quiet();
  for (double t : {0.1, 0.37, 1.9, 4.2}) {
    const auto c = synth_color(cfg, t);
    const double p = p_of(72.0, t);
    for (std::size_t i = 0; i < 3; ++i) {
      const double rel = c[i] / cfg.skin_base[i] - 1.0;
      CHECK(rel == doctest::Approx(cfg.pulse_rel_amp * cfg.pulse_direction[i] * p).epsilon(1e-9));
    }
  }
}

TEST_CASE("synth: truth peaks at 72 BPM") {
  const auto truth = synth_truth_peaks(quiet(72.0, 30.0));
  CHECK(truth.size() == 36);
  for (std::size_t i = 1; i < truth.size(); ++i) {
    CHECK(truth.peak_times[i] - truth.peak_times[i - 1] == doctest::Approx(60.0 / 72.0).epsilon(1e-12));
  }
  // each truth time is a maximum of p: brute-force search over a fine grid
  for (double t : truth.peak_times) {
    double best = t;
    for (double u = t - 0.2; u <= t + 0.2; u += 1e-5) {
      if (p_of(72.0, u) > p_of(72.0, best)) best = u;
    }
    CHECK(std::abs(best - t) <= 2e-5);
  }
}

TEST_CASE("synth: determinism") {
  auto cfg = quiet();
  cfg.noise_sd = 2.0;
  const auto a = synth_trace(cfg), b = synth_trace(cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  bool same = true;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    same = same && a.trace.samples[i].r == b.trace.samples[i].r &&
           a.trace.samples[i].g == b.trace.samples[i].g;
  }
  CHECK(same);
  cfg.seed = 2;
  const auto c = synth_trace(cfg);
  CHECK(c.trace.samples[5].g != a.trace.samples[5].g);

  const SynthVideo v1(cfg, 160, 160), v2(cfg, 160, 160);
  CHECK(v1.frame(17).pixels == v2.frame(17).pixels);
  CHECK(v1.frame(17).pixels != v1.frame(18).pixels);
}

TEST_CASE("synth: configuration errors") {
  auto check_config = [](const SynthConfig& cfg) {
    try {
      synth_trace(cfg);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  };
  SUBCASE("missing seed") {
    auto cfg = quiet();
    cfg.seed.reset();
    check_config(cfg);
  }
  SUBCASE("hr outside band") {
    check_config(quiet(30.0));
    check_config(quiet(250.0));
  }
  SUBCASE("pulse amplitude") {
    auto cfg = quiet();
    cfg.pulse_rel_amp = 0.1;
    check_config(cfg);
  }
  SUBCASE("frame too small for the roi") {
    try {
      SynthVideo v(quiet(), 150, 160, 40);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }
}

TEST_CASE("synth: peak count of the clean pulse matches the truth") {
  for (double hr : {48.0, 72.0, 95.0, 150.0, 200.0}) {
    const auto cfg = quiet(hr, 30.0);
    PulseSignal s;
    s.fps = cfg.fps;
    for (std::size_t i = 0; i < cfg.frame_count(); ++i) s.values.push_back(p_of(hr, i / cfg.fps));
    const auto found = detect_peaks(s);
    const auto truth = synth_truth_peaks(cfg);
    CHECK(std::abs(static_cast<long>(found.size()) - static_cast<long>(truth.size())) <= 1);
  }
}

TEST_CASE("synth: noiseless frames hold the rounded trace colour") {
  auto cfg = quiet();
  const SynthVideo video(cfg, 160, 160);
  const auto trace = synth_trace(cfg).trace;
  for (std::size_t i : {0u, 11u, 150u, 299u}) {
    const auto f = video.frame(i);
    REQUIRE(f.pixels.size() == 160u * 160u * 3u);
    CHECK(f.pixels[0] == std::lround(trace.samples[i].r));
    CHECK(f.pixels[1] == std::lround(trace.samples[i].g));
    CHECK(f.pixels[2] == std::lround(trace.samples[i].b));
    CHECK(f.pixels[3 * 12345 + 1] == f.pixels[1]);
  }
}

TEST_CASE("synth: per-pixel noise has the configured spread") {
  auto cfg = quiet();
  cfg.noise_sd = 2.0;
  cfg.pulse_rel_amp = 0.0;
  const SynthVideo video(cfg, 200, 200);
  const auto f = video.frame(3);
  std::vector<double> g;
  for (std::size_t i = 1; i < f.pixels.size(); i += 3) g.push_back(f.pixels[i]);
  CHECK(oracle::mean(g) == doctest::Approx(120.0).epsilon(0.01));
  // rounding adds 1/12 to the variance
  CHECK(std::sqrt(oracle::variance(g)) == doctest::Approx(std::sqrt(4.0 + 1.0 / 12.0)).epsilon(0.05));
}

TEST_CASE("synth: posed landmarks report the commanded yaw") {
  for (double yaw : {-40.0, -15.0, 0.0, 7.5, 25.0, 60.0}) {
    const auto lms = posed_landmarks(yaw, 320, 240);
    CHECK(estimate_yaw(lms).degrees == doctest::Approx(yaw).epsilon(1e-9));
    for (const auto& p : lms.points) {
      CHECK(p.x >= 0.0);
      CHECK(p.x <= 1.0);
      CHECK(p.y >= 0.0);
      CHECK(p.y <= 1.0);
    }
  }
}

TEST_CASE("synth: yaw ramp switches cheeks at the threshold") {
  auto cfg = quiet(72.0, 10.0);
  cfg.forehead_occluded = true;
  cfg.yaw_profile = {{0.0, 0.0}, {10.0, 30.0}};
  const SynthVideo video(cfg, 160, 160);
  // 15 degrees is reached at t = 5 s, frame 150
  long first_right = -1;
  for (std::size_t i = 0; i < video.frame_count(); ++i) {
    const auto lms = video.landmarks(i);
    const auto sel = select_roi(lms, estimate_yaw(lms), 160, 160);
    if (sel.region == Region::RightCheek && first_right < 0) first_right = static_cast<long>(i);
    if (first_right < 0) CHECK(sel.region == Region::LeftCheek);
    else CHECK(sel.region == Region::RightCheek);
  }
  CHECK(std::abs(first_right - 150) <= 1);
}

TEST_CASE("synth: 4x downsampling keeps ROI means within one level") {
  auto cfg = quiet();
  cfg.noise_sd = 2.0;
  const SynthVideo video(cfg, 320, 240, 40);
  for (std::size_t i : {0u, 40u, 77u}) {
    const auto full = video.frame(i);
    const auto small = downsample(full, 4);
    REQUIRE(small.width == 80);
    REQUIRE(small.height == 60);
    const auto lms = video.landmarks(i);
    const auto big_roi = select_roi(lms, estimate_yaw(lms), 320, 240, {40, 15.0});
    const auto small_roi = select_roi(lms, estimate_yaw(lms), 80, 60, {10, 15.0});
    const auto a = crop_mean_rgb(full, big_roi), b = crop_mean_rgb(small, small_roi);
    CHECK(std::abs(a.r - b.r) <= 1.0);
    CHECK(std::abs(a.g - b.g) <= 1.0);
    CHECK(std::abs(a.b - b.b) <= 1.0);
  }
}
