#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracklet_assoc {

using TrackId = int;
using Frame = int;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
};

// Axis-aligned box, (x, y) is the top-left corner, all values in pixels.
struct Box {
  double x{0.0};
  double y{0.0};
  double w{0.0};
  double h{0.0};

  Vec2 center() const { return {x + 0.5 * w, y + 0.5 * h}; }
  double area() const { return w * h; }
  Box translated(Vec2 d) const { return {x + d.x, y + d.y, w, h}; }

  static Box from_center(Vec2 c, double w, double h) {
    return {c.x - 0.5 * w, c.y - 0.5 * h, w, h};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

// Confidence value written for "unset".
inline constexpr double kUnsetConfidence = -1.0;

struct Detection {
  Frame frame{1};
  TrackId track_id{1};
  Box box{};
  double conf{kUnsetConfidence};

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct SequenceMeta {
  double fps{30.0};
  int img_width{1920};
  int img_height{1080};
  int num_frames{1};

  double diagonal() const {
    return std::sqrt(static_cast<double>(img_width) * img_width +
                     static_cast<double>(img_height) * img_height);
  }

  void validate() const {
    if (!(fps > 0.0) || img_width <= 0 || img_height <= 0 || num_frames <= 0) {
      throw std::invalid_argument("sequence metadata must be positive (fps, width, height, length)");
    }
  }
};

// Summary of one end of a tracklet: the frame of the extreme detection, a
// representative box and the mean center velocity in pixels per frame.
struct EndpointSummary {
  Frame frame{1};
  Box box{};
  Vec2 velocity{};
};

struct Tracklet {
  TrackId id{1};
  std::vector<Detection> detections;
  EndpointSummary start;
  EndpointSummary end;

  Frame first_frame() const { return detections.front().frame; }
  Frame last_frame() const { return detections.back().frame; }
  std::size_t size() const { return detections.size(); }
};

// Raised on inconsistent input data (e.g. a duplicated (id, frame) pair).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tracklet_assoc
