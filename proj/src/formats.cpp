#include "rppg/formats.hpp"

#include <json.hpp>

#include "rppg/error.hpp"

namespace rppg {

namespace fs = std::filesystem;
using nlohmann::json;

FrameStreamHeader read_frame_header(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open frame header " + path.string());
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::Parse, "malformed frame header " + path.string());
  }
  FrameStreamHeader h;
  try {
    h.width = j.at("width").get<int>();
    h.height = j.at("height").get<int>();
    h.fps = j.at("fps").get<double>();
    h.frame_count = j.at("frame_count").get<std::size_t>();
    h.pixel_format = j.at("pixel_format").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, "frame header " + path.string() + ": " + e.what());
  }
  if (h.pixel_format != kPixelFormat) {
    throw Error(ErrorKind::Format, "unsupported pixel_format '" + h.pixel_format + "'");
  }
  if (h.width <= 0 || h.height <= 0 || !(h.fps > 0.0)) {
    throw Error(ErrorKind::Format, "frame header has non-positive dimensions or fps");
  }
  return h;
}

void write_frame_header(const fs::path& path, const FrameStreamHeader& h) {
  json j{{"width", h.width},
         {"height", h.height},
         {"fps", h.fps},
         {"frame_count", h.frame_count},
         {"pixel_format", h.pixel_format}};
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

FrameStreamReader::FrameStreamReader(const fs::path& header_path,
                                     const fs::path& payload_path)
    : header_(read_frame_header(header_path)) {
  std::error_code ec;
  const auto size = fs::file_size(payload_path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot stat payload " + payload_path.string());
  const auto expected = header_.frame_bytes() * header_.frame_count;
  if (size != expected) {
    throw Error(ErrorKind::TruncatedStream,
                "payload " + payload_path.string() + " has " + std::to_string(size) +
                    " bytes, header implies " + std::to_string(expected));
  }
  payload_.open(payload_path, std::ios::binary);
  if (!payload_) throw Error(ErrorKind::Io, "cannot open payload " + payload_path.string());
}

std::optional<Frame> FrameStreamReader::next() {
  if (next_index_ >= header_.frame_count) return std::nullopt;
  Frame f;
  f.width = header_.width;
  f.height = header_.height;
  f.pixels.resize(header_.frame_bytes());
  payload_.read(reinterpret_cast<char*>(f.pixels.data()),
                static_cast<std::streamsize>(f.pixels.size()));
  if (payload_.gcount() != static_cast<std::streamsize>(f.pixels.size())) {
    throw Error(ErrorKind::TruncatedStream,
                "payload ended inside frame " + std::to_string(next_index_));
  }
  ++next_index_;
  return f;
}

double FrameStreamReader::last_timestamp() const noexcept {
  return next_index_ == 0 ? 0.0 : static_cast<double>(next_index_ - 1) / header_.fps;
}

FrameStreamReader read_frame_stream(const fs::path& header_path, const fs::path& payload_path) {
  return FrameStreamReader(header_path, payload_path);
}

FrameStreamHeader write_frame_stream(const fs::path& header_path, const fs::path& payload_path,
                                     FrameSource& frames) {
  std::ofstream out(payload_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + payload_path.string());
  FrameStreamHeader h;
  h.width = frames.width();
  h.height = frames.height();
  h.fps = frames.fps();
  while (auto f = frames.next()) {
    if (f->width != h.width || f->height != h.height ||
        f->pixels.size() != h.frame_bytes()) {
      throw Error(ErrorKind::Format, "frame dimensions changed mid-stream");
    }
    out.write(reinterpret_cast<const char*>(f->pixels.data()),
              static_cast<std::streamsize>(f->pixels.size()));
    ++h.frame_count;
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + payload_path.string());
  write_frame_header(header_path, h);
  return h;
}

std::vector<LandmarkSet> read_landmark_stream(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open landmark stream " + path.string());
  std::vector<LandmarkSet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_landmark_frame(line));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate_landmark_stream(out);
  return out;
}

void write_landmark_stream(const fs::path& path, const std::vector<LandmarkSet>& stream) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (const auto& lms : stream) out << serialize_landmark_frame(lms) << '\n';
}

}  // namespace rppg
