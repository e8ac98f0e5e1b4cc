#pragma once

// Tracklet endpoint summaries and overlap-triggered tracklet cutting.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

inline double iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

// Tracklets with at least `min_length` detections summarize each end by
// averaging `window` boxes next to (but excluding) the extreme detection.
// Shorter tracklets use the extreme box and the velocity between the two
// extreme detections.
struct EndpointConfig {
  std::size_t window{6};
  std::size_t min_length{10};

  void validate() const {
    if (window < 2) throw std::invalid_argument("endpoint window must be >= 2");
    if (min_length < window + 1) {
      throw std::invalid_argument("endpoint min_length must exceed the window size");
    }
  }
};

namespace detail {

inline Vec2 step_velocity(const Detection& a, const Detection& b) {
  return (b.box.center() - a.box.center()) / static_cast<double>(b.frame - a.frame);
}

// Mean box and mean per-step velocity over detections [first, first + count).
inline EndpointSummary averaged_summary(const std::vector<Detection>& dets, std::size_t first,
                                        std::size_t count, Frame frame) {
  EndpointSummary s;
  s.frame = frame;
  for (std::size_t i = first; i < first + count; ++i) {
    s.box.x += dets[i].box.x;
    s.box.y += dets[i].box.y;
    s.box.w += dets[i].box.w;
    s.box.h += dets[i].box.h;
  }
  const double n = static_cast<double>(count);
  s.box = {s.box.x / n, s.box.y / n, s.box.w / n, s.box.h / n};
  Vec2 v;
  for (std::size_t i = first; i + 1 < first + count; ++i) v = v + step_velocity(dets[i], dets[i + 1]);
  s.velocity = v / static_cast<double>(count - 1);
  return s;
}

}  // namespace detail

inline std::pair<EndpointSummary, EndpointSummary> build_endpoints(
    const std::vector<Detection>& dets, const EndpointConfig& cfg = {}) {
  if (dets.empty()) throw std::invalid_argument("build_endpoints: empty detection list");
  const std::size_t n = dets.size();
  const Frame f_start = dets.front().frame;
  const Frame f_end = dets.back().frame;

  if (n >= cfg.min_length) {
    return {detail::averaged_summary(dets, 1, cfg.window, f_start),
            detail::averaged_summary(dets, n - 1 - cfg.window, cfg.window, f_end)};
  }
  EndpointSummary start{f_start, dets.front().box, {}};
  EndpointSummary end{f_end, dets.back().box, {}};
  if (n >= 2) {
    start.velocity = detail::step_velocity(dets[0], dets[1]);
    end.velocity = detail::step_velocity(dets[n - 2], dets[n - 1]);
  }
  return {start, end};
}

// Detections must be frame-sorted and non-empty; their track_id is rewritten to `id`.
inline Tracklet make_tracklet(TrackId id, std::vector<Detection> dets,
                              const EndpointConfig& cfg = {}) {
  Tracklet t;
  t.id = id;
  for (auto& d : dets) d.track_id = id;
  t.detections = std::move(dets);
  std::tie(t.start, t.end) = build_endpoints(t.detections, cfg);
  return t;
}

struct CutResult {
  std::vector<Tracklet> tracklets;
  std::size_t cuts{0};  // number of (tracklet, frame) split points
};

// Cuts every pair of tracklets whose detections reach IoU >= t_tc in a frame
// where they did not already overlap in the previous frame. The overlapping
// detections head the new fragments. Fragments get ids 1..N ordered by source
// tracklet position, then by start frame.
inline CutResult cut_tracklets_counted(const std::vector<Tracklet>& tracklets, double t_tc,
                                       const EndpointConfig& cfg = {}) {
  if (!(t_tc > 0.0 && t_tc <= 1.0)) throw std::invalid_argument("T_TC must lie in (0, 1]");

  // frame -> (tracklet index, detection index)
  std::map<Frame, std::vector<std::pair<std::size_t, std::size_t>>> by_frame;
  for (std::size_t ti = 0; ti < tracklets.size(); ++ti) {
    for (std::size_t di = 0; di < tracklets[ti].detections.size(); ++di) {
      by_frame[tracklets[ti].detections[di].frame].emplace_back(ti, di);
    }
  }

  std::vector<std::set<std::size_t>> cut_at(tracklets.size());  // detection indices heading fragments
  std::set<std::pair<std::size_t, std::size_t>> prev_overlaps;
  Frame prev_frame = 0;
  for (const auto& [frame, entries] : by_frame) {
    std::set<std::pair<std::size_t, std::size_t>> overlaps;
    for (std::size_t a = 0; a < entries.size(); ++a) {
      for (std::size_t b = a + 1; b < entries.size(); ++b) {
        const auto [ta, da] = entries[a];
        const auto [tb, db] = entries[b];
        if (ta == tb) continue;
        const Box& ba = tracklets[ta].detections[da].box;
        const Box& bb = tracklets[tb].detections[db].box;
        if (iou(ba, bb) < t_tc) continue;
        const std::pair<std::size_t, std::size_t> key{std::min(ta, tb), std::max(ta, tb)};
        overlaps.insert(key);
        const bool continuing = prev_frame == frame - 1 && prev_overlaps.contains(key);
        if (continuing) continue;
        if (da > 0) cut_at[ta].insert(da);
        if (db > 0) cut_at[tb].insert(db);
      }
    }
    prev_overlaps = std::move(overlaps);
    prev_frame = frame;
  }

  CutResult result;
  TrackId next_id = 1;
  for (std::size_t ti = 0; ti < tracklets.size(); ++ti) {
    const auto& dets = tracklets[ti].detections;
    result.cuts += cut_at[ti].size();
    std::size_t begin = 0;
    auto emit = [&](std::size_t end) {
      std::vector<Detection> part(dets.begin() + static_cast<std::ptrdiff_t>(begin),
                                  dets.begin() + static_cast<std::ptrdiff_t>(end));
      result.tracklets.push_back(make_tracklet(next_id++, std::move(part), cfg));
      begin = end;
    };
    for (const std::size_t c : cut_at[ti]) emit(c);
    emit(dets.size());
  }
  return result;
}

inline std::vector<Tracklet> cut_tracklets(const std::vector<Tracklet>& tracklets, double t_tc,
                                           const EndpointConfig& cfg = {}) {
  return cut_tracklets_counted(tracklets, t_tc, cfg).tracklets;
}

}  // namespace tracklet_assoc
