#include <doctest.h>

#include <cmath>

#include "rppg/error.hpp"
#include "rppg/pipeline.hpp"
#include "rppg/synth.hpp"

using namespace rppg;

namespace {

SynthConfig scene(double hr, double duration = 30.0, std::uint64_t seed = 42) {
  SynthConfig cfg;
  cfg.hr_bpm = hr;
  cfg.duration = duration;
  cfg.noise_sd = 2.0;
  cfg.seed = seed;
  return cfg;
}

PipelineResult run(const SynthConfig& cfg, std::vector<LandmarkSet>* lms_override = nullptr,
                   const PipelineConfig& pc = {}) {
  const SynthVideo video(cfg, 160, 160);
  SynthFrameSource src(video);
  const auto lms = lms_override ? *lms_override : video.all_landmarks();
  return run_pipeline_detailed(src, lms, pc);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected rppg::Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("pipeline: 72 BPM synthetic subject") {
  const auto res = run(scene(72.0));
  const auto& r = res.report;
  CHECK(r.video_hr_bpm >= 70.5);
  CHECK(r.video_hr_bpm <= 73.5);
  CHECK(r.windows.size() == 3);
  for (const auto& w : r.windows) CHECK(w.method == HrMethod::IBI);
  CHECK(r.diagnostics.frames_total == 900);
  CHECK(r.diagnostics.frames_detected == 900);
  CHECK(r.diagnostics.gaps.empty());
  CHECK(r.diagnostics.region_switches.empty());
  CHECK(r.diagnostics.csd_pairing == "lagged");
  CHECK(std::abs(r.diagnostics.welch_hr_bpm - 72.0) <= 6.0);
  CHECK(std::abs(r.diagnostics.csd_hr_bpm - 72.0) <= 6.0);
  REQUIRE(r.diagnostics.snr_before_db);
  REQUIRE(r.diagnostics.snr_after_db);
  CHECK(*r.diagnostics.snr_after_db > *r.diagnostics.snr_before_db);
  REQUIRE(r.roi_timeline.size() == 900);
  for (const auto& e : r.roi_timeline) CHECK(e.region == Region::Forehead);
}

TEST_CASE("pipeline: intensity modulation is rejected") {
  auto cfg = scene(66.0);
  cfg.intensity_amp = 0.05;
  cfg.intensity_freq_hz = 0.3;
  const auto r = run(cfg).report;
  CHECK(std::abs(r.video_hr_bpm - 66.0) <= 1.5);
}

TEST_CASE("pipeline: output is deterministic and round-trips through JSON") {
  const auto a = run(scene(80.0, 20.0)).report;
  const auto b = run(scene(80.0, 20.0)).report;
  CHECK(to_json(a).dump() == to_json(b).dump());
  const auto back = report_from_json(nlohmann::json::parse(to_json(a).dump()));
  CHECK(back == a);
}

TEST_CASE("pipeline: undetected frames") {
  const auto cfg = scene(72.0, 15.0);
  const SynthVideo video(cfg, 160, 160);
  SUBCASE("all undetected") {
    auto lms = video.all_landmarks();
    for (auto& l : lms) {
      l.detected = false;
      l.points.clear();
    }
    SynthFrameSource src(video);
    CHECK(kind_of([&] { run_pipeline(src, lms, {}); }) == ErrorKind::InsufficientData);
  }
  SUBCASE("a short gap is reported and skipped") {
    auto lms = video.all_landmarks();
    for (std::size_t i = 100; i < 110; ++i) {
      lms[i].detected = false;
      lms[i].points.clear();
    }
    lms.erase(lms.begin() + 200);
    SynthFrameSource src(video);
    const auto r = run_pipeline(src, lms, {});
    CHECK(r.diagnostics.frames_total == 450);
    CHECK(r.diagnostics.frames_detected == 439);
    REQUIRE(r.diagnostics.gaps.size() == 11);
    CHECK(r.diagnostics.gaps.front() == 100);
    CHECK(r.diagnostics.gaps.back() == 200);
    CHECK(std::abs(r.video_hr_bpm - 72.0) <= 3.0);
  }
}

TEST_CASE("pipeline: alignment errors") {
  const auto cfg = scene(72.0, 12.0);
  const SynthVideo video(cfg, 160, 160);
  SUBCASE("duplicate record") {
    auto lms = video.all_landmarks();
    lms.push_back(lms[5]);
    SynthFrameSource src(video);
    CHECK(kind_of([&] { run_pipeline(src, lms, {}); }) == ErrorKind::Alignment);
  }
  SUBCASE("record past the last frame") {
    auto lms = video.all_landmarks();
    auto extra = lms.back();
    extra.frame_index = 5000;
    lms.push_back(extra);
    SynthFrameSource src(video);
    CHECK(kind_of([&] { run_pipeline(src, lms, {}); }) == ErrorKind::Alignment);
  }
}

TEST_CASE("pipeline: too short for one HR window") {
  const auto cfg = scene(72.0, 5.0);
  CHECK(kind_of([&] { run(cfg); }) == ErrorKind::InsufficientData);
}

TEST_CASE("pipeline: occluded forehead with a yaw ramp") {
  auto cfg = scene(90.0, 30.0);
  cfg.forehead_occluded = true;
  cfg.yaw_profile = {{0.0, 0.0}, {30.0, 30.0}};
  const auto res = run(cfg);
  const auto& r = res.report;
  REQUIRE(r.diagnostics.region_switches.size() == 1);
  // 15 degrees at t = 15 s
  CHECK(std::abs(static_cast<long>(r.diagnostics.region_switches[0]) - 450) <= 1);
  CHECK(r.roi_timeline.front().region == Region::LeftCheek);
  CHECK(r.roi_timeline.back().region == Region::RightCheek);
  CHECK(r.diagnostics.straddling_pos_windows == 47);
  CHECK(r.diagnostics.csd_pairing == "forehead");
  CHECK(std::abs(r.video_hr_bpm - 90.0) <= 2.0);
}

TEST_CASE("pipeline: config controls the windows") {
  PipelineConfig pc;
  pc.hr_window_s = 5.0;
  const auto r = run(scene(72.0, 20.0), nullptr, pc).report;
  CHECK(r.windows.size() == 4);
  for (std::size_t i = 1; i < r.windows.size(); ++i) {
    CHECK(r.windows[i].window_start == doctest::Approx(r.windows[i - 1].window_end));
  }
}
