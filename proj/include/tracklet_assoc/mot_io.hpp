#pragma once

// MOTChallenge text format: `frame,id,x,y,w,h,conf,x3d,y3d,z3d`.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tracklet_assoc/tracklet_model.hpp"
#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

// Integers in MOT files are occasionally written as "3.0"; accept integral reals.
inline bool parse_integral(std::string_view s, int& out) {
  double v = 0.0;
  if (!parse_double(s, v) || v != std::floor(v) || std::abs(v) > 2.0e9) return false;
  out = static_cast<int>(v);
  return true;
}

// Shortest representation that round-trips exactly.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline std::vector<Detection> parse_tracks(std::istream& in) {
  std::vector<Detection> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto fields = detail::split(body, ',');
    if (fields.size() < 7) {
      throw ParseError(line_no, "expected at least 7 comma-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    Detection d;
    if (!detail::parse_integral(fields[0], d.frame)) throw ParseError(line_no, "invalid frame");
    if (!detail::parse_integral(fields[1], d.track_id)) throw ParseError(line_no, "invalid id");
    if (!detail::parse_double(fields[2], d.box.x) || !detail::parse_double(fields[3], d.box.y) ||
        !detail::parse_double(fields[4], d.box.w) || !detail::parse_double(fields[5], d.box.h)) {
      throw ParseError(line_no, "invalid box coordinates");
    }
    if (!detail::parse_double(fields[6], d.conf)) throw ParseError(line_no, "invalid confidence");
    if (d.frame < 1) throw ParseError(line_no, "frame must be >= 1");
    if (d.track_id < 1) throw ParseError(line_no, "id must be >= 1");
    if (!(d.box.w > 0.0) || !(d.box.h > 0.0)) {
      throw ParseError(line_no, "box width and height must be positive");
    }
    out.push_back(d);
  }
  return out;
}

inline std::vector<Detection> parse_tracks(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_tracks(in);
}

// Sorted by (frame, id); one LF-terminated line per detection.
inline void write_tracks(std::ostream& out, std::vector<Detection> detections) {
  std::stable_sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.track_id < b.track_id;
  });
  for (const auto& d : detections) {
    out << d.frame << ',' << d.track_id << ',' << detail::format_number(d.box.x) << ','
        << detail::format_number(d.box.y) << ',' << detail::format_number(d.box.w) << ','
        << detail::format_number(d.box.h) << ',' << detail::format_number(d.conf) << ",-1,-1,-1\n";
  }
}

inline std::string write_tracks(std::vector<Detection> detections) {
  std::ostringstream out;
  write_tracks(out, std::move(detections));
  return out.str();
}

// Reads `frameRate`, `imWidth`, `imHeight`, `seqLength` from a seqinfo.ini-style
// key=value file. Section headers and unknown keys are ignored.
inline SequenceMeta read_seqinfo(std::istream& in) {
  SequenceMeta meta;
  bool have_fps = false, have_w = false, have_h = false, have_len = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '[' || body.front() == '#' || body.front() == ';') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) continue;
    const auto key = detail::trim(body.substr(0, eq));
    const auto value = detail::trim(body.substr(eq + 1));
    auto bad = [&] { return ParseError(line_no, "invalid value for " + std::string(key)); };
    if (key == "frameRate") {
      if (!detail::parse_double(value, meta.fps)) throw bad();
      have_fps = true;
    } else if (key == "imWidth") {
      if (!detail::parse_integral(value, meta.img_width)) throw bad();
      have_w = true;
    } else if (key == "imHeight") {
      if (!detail::parse_integral(value, meta.img_height)) throw bad();
      have_h = true;
    } else if (key == "seqLength") {
      if (!detail::parse_integral(value, meta.num_frames)) throw bad();
      have_len = true;
    }
  }
  if (!have_fps || !have_w || !have_h) {
    throw ParseError(line_no, "seqinfo must define frameRate, imWidth and imHeight");
  }
  if (!have_len) meta.num_frames = 1;
  meta.validate();
  return meta;
}

inline void write_seqinfo(std::ostream& out, const SequenceMeta& meta, std::string_view name) {
  out << "[Sequence]\n"
      << "name=" << name << '\n'
      << "frameRate=" << detail::format_number(meta.fps) << '\n'
      << "seqLength=" << meta.num_frames << '\n'
      << "imWidth=" << meta.img_width << '\n'
      << "imHeight=" << meta.img_height << '\n';
}

// Partitions detections by track id. Tracklets come out ordered by id, each
// frame-sorted, with endpoint summaries filled in.
inline std::vector<Tracklet> group_tracklets(const std::vector<Detection>& detections,
                                             const EndpointConfig& endpoints = {}) {
  std::map<TrackId, std::vector<Detection>> groups;
  for (const auto& d : detections) groups[d.track_id].push_back(d);

  std::vector<Tracklet> out;
  out.reserve(groups.size());
  for (auto& [id, dets] : groups) {
    std::stable_sort(dets.begin(), dets.end(),
                     [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
    for (std::size_t i = 1; i < dets.size(); ++i) {
      if (dets[i].frame == dets[i - 1].frame) {
        throw DataError("(" + std::to_string(id) + "," + std::to_string(dets[i].frame) +
                        ") duplicated");
      }
    }
    out.push_back(make_tracklet(id, std::move(dets), endpoints));
  }
  return out;
}

inline std::vector<Detection> flatten(const std::vector<Tracklet>& tracklets) {
  std::vector<Detection> out;
  for (const auto& t : tracklets) out.insert(out.end(), t.detections.begin(), t.detections.end());
  return out;
}

}  // namespace tracklet_assoc
