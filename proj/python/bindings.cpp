#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rppg/cli.hpp"
#include "rppg/config.hpp"
#include "rppg/error.hpp"
#include "rppg/eval.hpp"
#include "rppg/filters.hpp"
#include "rppg/formats.hpp"
#include "rppg/hr.hpp"
#include "rppg/landmarks.hpp"
#include "rppg/pipeline.hpp"

namespace py = pybind11;

namespace {

rppg::PulseSignal as_signal(std::vector<double> values, double fps) {
  rppg::PulseSignal s;
  s.values = std::move(values);
  s.fps = fps;
  return s;
}

std::vector<rppg::SubjectValue> as_subjects(const std::map<std::string, double>& m) {
  std::vector<rppg::SubjectValue> out;
  for (const auto& [k, v] : m) out.push_back({k, v});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "rPPG heart-rate extraction core";

  static py::exception<rppg::Error> error(m, "RppgError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const rppg::Error& e) {
      py::set_error(error, (std::string(rppg::to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("moving_average", [](std::vector<double> x, int points) {
    return rppg::moving_average(x, points);
  }, py::arg("x"), py::arg("points"));

  m.def("welch_psd", [](std::vector<double> x, double fps, double segment_s) {
    const auto psd = rppg::welch_psd(as_signal(std::move(x), fps), segment_s);
    return py::make_tuple(psd.freqs, psd.power);
  }, py::arg("x"), py::arg("fps"), py::arg("segment_s") = 10.0);

  m.def("parse_landmark_frame", [](const std::string& line) {
    const auto lms = rppg::parse_landmark_frame(line);
    return rppg::serialize_landmark_frame(lms);
  }, py::arg("line"), "Validates one landmark record and returns its canonical JSON text.");

  m.def("estimate_yaw", [](const std::string& line) {
    return rppg::estimate_yaw(rppg::parse_landmark_frame(line)).degrees;
  }, py::arg("line"));

  m.def("extract", [](const std::string& frames, const std::string& payload,
                      const std::string& landmarks, const std::string& config_json) {
    rppg::PipelineConfig cfg;
    if (!config_json.empty()) rppg::merge_config(cfg, nlohmann::json::parse(config_json));
    auto reader = rppg::read_frame_stream(frames, payload);
    const auto lms = rppg::read_landmark_stream(landmarks);
    py::gil_scoped_release release;
    return rppg::to_json(rppg::run_pipeline(reader, lms, cfg)).dump();
  }, py::arg("frames"), py::arg("payload"), py::arg("landmarks"), py::arg("config_json") = "");

  m.def("evaluate", [](const std::map<std::string, double>& estimates,
                       const std::map<std::string, double>& ground_truth) {
    return rppg::to_json(rppg::evaluate(as_subjects(estimates), as_subjects(ground_truth))).dump();
  }, py::arg("estimates"), py::arg("ground_truth"));

  m.def("cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = rppg::cli_main(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
