#pragma once

// Linear gap filling inside trajectories.

#include <stdexcept>
#include <vector>

#include "tracklet_assoc/tracklet_model.hpp"
#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

struct Gap {
  TrackId trajectory{0};
  Detection left;
  Detection right;

  int size() const { return right.frame - left.frame - 1; }
};

inline std::vector<Gap> find_gaps(const std::vector<Detection>& trajectory) {
  std::vector<Gap> gaps;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    const auto& a = trajectory[i - 1];
    const auto& b = trajectory[i];
    if (b.frame <= a.frame) throw std::invalid_argument("find_gaps: frames must be strictly increasing");
    if (b.frame - a.frame > 1) gaps.push_back({a.track_id, a, b});
  }
  return gaps;
}

// Fills every gap of 1 <= size < max_gap_size missing frames. Centers are
// spaced evenly between the edge centers and sizes interpolated linearly;
// inserted detections carry conf = 1.
inline std::vector<Detection> fill_gaps(const std::vector<Detection>& trajectory, int max_gap_size) {
  if (max_gap_size < 1) throw std::invalid_argument("maxGapSize must be positive");
  std::vector<Detection> out;
  out.reserve(trajectory.size());
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const auto& cur = trajectory[i];
    if (i > 0) {
      const auto& prev = trajectory[i - 1];
      if (cur.frame <= prev.frame) {
        throw std::invalid_argument("fill_gaps: frames must be strictly increasing");
      }
      const int missing = cur.frame - prev.frame - 1;
      if (missing >= 1 && missing < max_gap_size) {
        const Vec2 c0 = prev.box.center();
        const Vec2 c1 = cur.box.center();
        const double span = static_cast<double>(cur.frame - prev.frame);
        for (Frame f = prev.frame + 1; f < cur.frame; ++f) {
          const double a = static_cast<double>(f - prev.frame) / span;
          const double w = prev.box.w + a * (cur.box.w - prev.box.w);
          const double h = prev.box.h + a * (cur.box.h - prev.box.h);
          out.push_back({f, prev.track_id, Box::from_center(c0 + (c1 - c0) * a, w, h), 1.0});
        }
      }
    }
    out.push_back(cur);
  }
  return out;
}

// Applies fill_gaps to every trajectory; returns the number of inserted detections.
inline std::size_t fill_trajectories(std::vector<Tracklet>& trajectories, int max_gap_size,
                                     const EndpointConfig& endpoints = {}) {
  std::size_t inserted = 0;
  for (auto& t : trajectories) {
    auto filled = fill_gaps(t.detections, max_gap_size);
    inserted += filled.size() - t.detections.size();
    if (filled.size() != t.detections.size()) t = make_tracklet(t.id, std::move(filled), endpoints);
  }
  return inserted;
}

}  // namespace tracklet_assoc
