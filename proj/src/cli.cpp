#include "rppg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rppg/config.hpp"
#include "rppg/error.hpp"
#include "rppg/eval.hpp"
#include "rppg/formats.hpp"
#include "rppg/pipeline.hpp"
#include "rppg/synth.hpp"

namespace rppg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PipelineArgs {
  std::string frames;
  std::string payload;
  std::string landmarks;
  std::string config;
  int downsample = 1;
  std::optional<int> roi_size;
  std::optional<double> yaw_threshold;
  std::optional<double> pos_window;
  std::optional<double> hr_window;
  std::optional<int> ma_points;
  std::optional<double> asf_delta;
  std::optional<double> band_lo;
  std::optional<double> band_hi;
  std::optional<double> welch_segment;

  void attach(CLI::App* cmd) {
    cmd->add_option("--frames", frames, "Frame stream header (JSON)")->required();
    cmd->add_option("--payload", payload, "Raw rgb8-interleaved payload")->required();
    cmd->add_option("--landmarks", landmarks, "Landmark stream (JSON lines)")->required();
    cmd->add_option("--config", config, "Pipeline config (JSON)");
    cmd->add_option("--downsample", downsample, "Block-average frames by this factor first")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--roi-size", roi_size, "ROI side in pixels");
    cmd->add_option("--yaw-threshold", yaw_threshold, "Cheek switch yaw threshold (degrees)");
    cmd->add_option("--pos-window", pos_window, "POS window (seconds)");
    cmd->add_option("--hr-window", hr_window, "IBI averaging window (seconds)");
    cmd->add_option("--ma-points", ma_points, "Moving-average length M");
    cmd->add_option("--asf-delta", asf_delta, "ASF relative amplitude bound");
    cmd->add_option("--band-lo", band_lo, "Lower band edge (Hz)");
    cmd->add_option("--band-hi", band_hi, "Upper band edge (Hz)");
    cmd->add_option("--welch-segment", welch_segment, "Welch segment (seconds)");
  }

  PipelineConfig build() const {
    PipelineConfig cfg = config.empty() ? PipelineConfig{} : load_config(config);
    if (roi_size) cfg.roi.roi_size = *roi_size;
    if (yaw_threshold) cfg.roi.yaw_threshold_deg = *yaw_threshold;
    if (pos_window) cfg.pos_window_s = *pos_window;
    if (hr_window) cfg.hr_window_s = *hr_window;
    if (ma_points) cfg.filter.ma_points = *ma_points;
    if (asf_delta) cfg.filter.asf_delta = *asf_delta;
    if (band_lo) cfg.filter.band_lo_hz = *band_lo;
    if (band_hi) cfg.filter.band_hi_hz = *band_hi;
    if (welch_segment) cfg.welch_segment_s = *welch_segment;
    return cfg;
  }

  PipelineResult run() const {
    const auto cfg = build();
    auto reader = read_frame_stream(frames, payload);
    const auto lms = read_landmark_stream(landmarks);
    if (downsample > 1) {
      DownsampledFrameSource small(reader, downsample);
      return run_pipeline_detailed(small, lms, cfg);
    }
    return run_pipeline_detailed(reader, lms, cfg);
  }
};

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << j.dump(2) << '\n';
}

// "a:b,c:d" -> [[a, b], [c, d]]
std::vector<std::vector<double>> parse_tuples(const std::string& text, std::size_t arity,
                                              const char* what) {
  std::vector<std::vector<double>> out;
  if (text.empty()) return out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    std::vector<double> tuple;
    std::stringstream fields(item);
    std::string field;
    while (std::getline(fields, field, ':')) {
      try {
        std::size_t used = 0;
        tuple.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Config, std::string("bad ") + what + " entry '" + item + "'");
      }
    }
    if (tuple.size() != arity) {
      throw Error(ErrorKind::Config, std::string("bad ") + what + " entry '" + item + "'");
    }
    out.push_back(std::move(tuple));
  }
  return out;
}

struct SynthArgs {
  std::string out_dir;
  double hr = 72.0;
  double duration = 30.0;
  double fps = 30.0;
  double noise_sd = 2.0;
  double pulse_amp = 0.002;
  double intensity_amp = 0.0;
  double intensity_freq = 0.3;
  int width = 160;
  int height = 160;
  int roi_size = 40;
  std::uint64_t seed = 42;
  std::string yaw_profile;
  std::string specular;
  bool occluded = false;

  void attach(CLI::App* cmd, bool with_output) {
    if (with_output) {
      cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    }
    cmd->add_option("--hr", hr, "Heart rate (BPM)");
    cmd->add_option("--duration", duration, "Clip length (seconds)");
    cmd->add_option("--fps", fps, "Frame rate");
    cmd->add_option("--noise-sd", noise_sd, "Per-pixel Gaussian noise SD");
    cmd->add_option("--pulse-amp", pulse_amp, "Relative pulsatile amplitude");
    cmd->add_option("--intensity-amp", intensity_amp, "Illumination modulation amplitude");
    cmd->add_option("--intensity-freq", intensity_freq, "Illumination modulation frequency (Hz)");
    cmd->add_option("--width", width, "Frame width");
    cmd->add_option("--height", height, "Frame height");
    cmd->add_option("--roi-size", roi_size, "ROI side in pixels");
    cmd->add_option("--seed", seed, "PRNG seed");
    cmd->add_option("--yaw-profile", yaw_profile, "Yaw keyframes 't:deg,t:deg,...'");
    cmd->add_option("--specular", specular, "Specular events 't:dur:mag,...'");
    cmd->add_flag("--occluded-forehead", occluded, "Flag the forehead as occluded");
  }

  SynthConfig build() const {
    SynthConfig cfg;
    cfg.hr_bpm = hr;
    cfg.duration = duration;
    cfg.fps = fps;
    cfg.noise_sd = noise_sd;
    cfg.pulse_rel_amp = pulse_amp;
    cfg.intensity_amp = intensity_amp;
    cfg.intensity_freq_hz = intensity_freq;
    cfg.seed = seed;
    cfg.forehead_occluded = occluded;
    for (const auto& t : parse_tuples(yaw_profile, 2, "yaw-profile")) {
      cfg.yaw_profile.emplace_back(t[0], t[1]);
    }
    for (const auto& t : parse_tuples(specular, 3, "specular")) {
      cfg.specular_events.push_back({t[0], t[1], t[2]});
    }
    return cfg;
  }
};

int run_synth(const SynthArgs& a, std::ostream& out) {
  const SynthVideo video(a.build(), a.width, a.height, a.roi_size);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  SynthFrameSource src(video);
  write_frame_stream(dir / "frames.json", dir / "frames.rgb", src);
  write_landmark_stream(dir / "landmarks.jsonl", video.all_landmarks());
  const auto truth = synth_truth_peaks(video.config());
  write_json((dir / "ground_truth.json").string(),
             {{"hr_bpm", video.config().hr_bpm},
              {"fps", video.config().fps},
              {"duration_s", video.config().duration},
              {"seed", *video.config().seed},
              {"peak_times", truth.peak_times}});
  out << "wrote " << video.frame_count() << " frames to " << dir.string() << '\n';
  return kExitOk;
}

int run_psd(const PipelineArgs& a, const std::string& out_path, std::ostream& out) {
  const auto res = a.run();
  std::ofstream csv(out_path);
  if (!csv) throw Error(ErrorKind::Io, "cannot write " + out_path);
  csv.precision(17);
  csv << "freq_hz,welch_power,csd_magnitude\n";
  for (std::size_t k = 0; k < res.welch.freqs.size(); ++k) {
    csv << res.welch.freqs[k] << ',' << res.welch.power[k] << ',';
    if (k < res.cross.power.size()) csv << res.cross.power[k];
    csv << '\n';
  }
  out << "welch peak " << res.report.diagnostics.welch_hr_bpm << " BPM, csd peak "
      << res.report.diagnostics.csd_hr_bpm << " BPM (" << res.report.diagnostics.csd_pairing
      << ")\n";
  return kExitOk;
}

int run_bench(const SynthArgs& a, const std::string& out_path, std::ostream& out) {
  const SynthVideo video(a.build(), a.width, a.height, a.roi_size);
  std::vector<Frame> frames;
  frames.reserve(video.frame_count());
  for (std::size_t i = 0; i < video.frame_count(); ++i) frames.push_back(video.frame(i));
  const auto lms = video.all_landmarks();
  VectorFrameSource src(std::move(frames), video.config().fps);
  PipelineConfig cfg;
  cfg.roi.roi_size = a.roi_size;

  const auto start = std::chrono::steady_clock::now();
  const auto report = run_pipeline(src, lms, cfg);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const double secs = std::max(elapsed.count(), 1e-9);
  const double fps = static_cast<double>(video.frame_count()) / secs;
  json j{{"frames", video.frame_count()},
         {"seconds", secs},
         {"frames_per_second", fps},
         {"realtime_factor", fps / video.config().fps},
         {"video_hr_bpm", report.video_hr_bpm}};
  if (!out_path.empty()) write_json(out_path, j);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InsufficientData:
    case ErrorKind::InsufficientPeaks:
      return kExitInsufficientData;
    case ErrorKind::Config:
      return kExitUsage;
    case ErrorKind::Io:
      return kExitIo;
    default:
      return kExitDataError;
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Remote photoplethysmography heart-rate toolkit", "rppg"};
  app.require_subcommand(1);

  PipelineArgs extract_args;
  std::string extract_out;
  auto* extract = app.add_subcommand("extract", "Estimate heart rate from frames + landmarks");
  extract_args.attach(extract);
  extract->add_option("--out", extract_out, "HR report (JSON)")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write a synthetic clip with known heart rate");
  synth_args.attach(synth, true);

  std::string est_path, gt_path, eval_out, eval_csv;
  auto* eval = app.add_subcommand("eval", "Error statistics against ground truth");
  eval->add_option("--estimates", est_path, "CSV of subject,hr_bpm")->required();
  eval->add_option("--ground-truth", gt_path, "CSV of subject,hr_bpm")->required();
  eval->add_option("--out", eval_out, "Eval report (JSON)")->required();
  eval->add_option("--csv", eval_csv, "Per-subject rows (CSV)");

  PipelineArgs psd_args;
  std::string psd_out;
  auto* psd = app.add_subcommand("psd", "Welch and cross spectra of the filtered pulse");
  psd_args.attach(psd);
  psd->add_option("--out", psd_out, "Spectra (CSV)")->required();

  SynthArgs bench_args;
  bench_args.noise_sd = 2.0;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Pipeline throughput on synthetic input");
  bench_args.attach(bench, false);
  bench->add_option("--out", bench_out, "Benchmark result (JSON)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*extract) {
      const auto res = extract_args.run();
      write_json(extract_out, to_json(res.report));
      out << "video HR " << res.report.video_hr_bpm << " BPM over "
          << res.report.windows.size() << " windows\n";
      return kExitOk;
    }
    if (*synth) return run_synth(synth_args, out);
    if (*eval) {
      const auto rep = evaluate(read_subject_csv(est_path), read_subject_csv(gt_path));
      write_json(eval_out, to_json(rep));
      if (!eval_csv.empty()) write_eval_csv(eval_csv, rep);
      out << "MAE " << rep.mae << " BPM, RMSE " << rep.rmse << " BPM, mean diff "
          << rep.bland_altman.mean_diff << " BPM\n";
      return kExitOk;
    }
    if (*psd) return run_psd(psd_args, psd_out, out);
    if (*bench) return run_bench(bench_args, bench_out, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error (i/o): " << e.what() << '\n';
    return kExitIo;
  }
  err << app.help();
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace rppg
