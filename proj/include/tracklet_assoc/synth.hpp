#pragma once

// Synthetic ground truth with constant-velocity motion, and tracker-like
// corruptions (fragmentation, identity swaps at crossings, dropout) with an
// event log describing exactly what was done.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

struct ScenarioConfig {
  int num_objects{10};
  int num_frames{300};
  double fps{30.0};
  int img_width{1920};
  int img_height{1080};
  double box_width_min{30.0};
  double box_width_max{60.0};
  double aspect_min{2.0};  // height / width
  double aspect_max{2.5};
  double speed_min{0.5};  // pixels per frame
  double speed_max{2.5};
  double turn_rate_max{0.0};  // radians per frame, applied to non-crossing objects
  int crossings{0};
  std::uint64_t seed{1};

  void validate() const {
    if (num_objects < 0 || num_frames < 1 || !(fps > 0.0) || img_width < 1 || img_height < 1) {
      throw std::invalid_argument("scenario: counts, fps and image size must be positive");
    }
    if (!(box_width_min > 0.0) || box_width_max < box_width_min || !(aspect_min > 0.0) ||
        aspect_max < aspect_min) {
      throw std::invalid_argument("scenario: invalid box size range");
    }
    if (speed_min < 0.0 || speed_max < speed_min || turn_rate_max < 0.0) {
      throw std::invalid_argument("scenario: invalid motion parameters");
    }
    if (crossings < 0 || 2 * crossings > num_objects) {
      throw std::invalid_argument("scenario: each crossing needs two objects");
    }
    if (crossings > 0 && (num_frames < 4 || !(speed_min > 0.0))) {
      throw std::invalid_argument("scenario: crossings need moving objects and at least 4 frames");
    }
  }
};

struct CrossingEvent {
  Frame frame{1};
  TrackId a{0};
  TrackId b{0};
};

struct SynthSequence {
  std::vector<Detection> gt;  // grouped by object id, frame-ascending within an object
  SequenceMeta meta;
  std::vector<CrossingEvent> crossings;
};

namespace detail {

class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool bernoulli(double p) { return p > 0.0 && std::bernoulli_distribution(p)(engine_); }

 private:
  std::mt19937_64 engine_;
};

struct ObjectShape {
  double w, h;
  double xlo, xhi, ylo, yhi;  // admissible center range

  bool contains(Vec2 c) const { return c.x >= xlo && c.x <= xhi && c.y >= ylo && c.y <= yhi; }
};

inline ObjectShape sample_shape(SynthRng& rng, const ScenarioConfig& cfg) {
  const double w = rng.uniform(cfg.box_width_min, cfg.box_width_max);
  const double h = w * rng.uniform(cfg.aspect_min, cfg.aspect_max);
  return {w, h, 1.0 + w / 2, cfg.img_width - 1.0 - w / 2, 1.0 + h / 2, cfg.img_height - 1.0 - h / 2};
}

inline Vec2 sample_velocity(SynthRng& rng, const ScenarioConfig& cfg) {
  const double speed = rng.uniform(cfg.speed_min, cfg.speed_max);
  const double heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return {speed * std::cos(heading), speed * std::sin(heading)};
}

inline constexpr int kMaxAttempts = 10000;

}  // namespace detail

// Every object is visible in every frame and its box stays at least 1 px inside
// the image. Crossing pairs are aimed at a common center reached at the same
// frame, drawn from the middle half of the sequence; turning objects are
// clamped to the image.
inline SynthSequence generate(const ScenarioConfig& cfg) {
  cfg.validate();
  const double max_h = cfg.box_width_max * cfg.aspect_max;
  if (cfg.box_width_max + 2.0 >= cfg.img_width || max_h + 2.0 >= cfg.img_height) {
    throw std::invalid_argument("scenario: boxes do not fit the image");
  }
  const double canvas = static_cast<double>(cfg.img_width) * cfg.img_height;
  if (cfg.num_objects * cfg.box_width_max * max_h > canvas) {
    throw std::invalid_argument("scenario: too many objects for the canvas");
  }

  detail::SynthRng rng(cfg.seed);
  const double last = static_cast<double>(cfg.num_frames - 1);
  SynthSequence seq;
  seq.meta = {cfg.fps, cfg.img_width, cfg.img_height, cfg.num_frames};

  auto emit_linear = [&](TrackId id, const detail::ObjectShape& s, Vec2 start, Vec2 vel) {
    for (Frame f = 1; f <= cfg.num_frames; ++f) {
      const Vec2 c = start + vel * static_cast<double>(f - 1);
      seq.gt.push_back({f, id, Box::from_center(c, s.w, s.h), 1.0});
    }
  };

  // Crossing pairs take ids 1..2k.
  for (int pair = 0; pair < cfg.crossings; ++pair) {
    const TrackId a = 2 * pair + 1;
    const TrackId b = a + 1;
    bool placed = false;
    for (int attempt = 0; attempt < detail::kMaxAttempts && !placed; ++attempt) {
      // One shape for both, so the IoU peaks only where the centers meet.
      const auto sa = detail::sample_shape(rng, cfg);
      const auto& sb = sa;
      const Frame meet = rng.uniform_int(std::max(1, cfg.num_frames / 4),
                                         std::max(1, 3 * cfg.num_frames / 4));
      const Vec2 point{rng.uniform(sa.xlo, sa.xhi), rng.uniform(sa.ylo, sa.yhi)};
      const Vec2 va = detail::sample_velocity(rng, cfg);
      const Vec2 vb = detail::sample_velocity(rng, cfg);
      // Require clearly different headings so the boxes approach and separate.
      const double cosang = (va.x * vb.x + va.y * vb.y) / (va.norm() * vb.norm());
      if (cosang > std::cos(std::numbers::pi / 6)) continue;
      const double before = static_cast<double>(meet - 1);
      const Vec2 start_a = point - va * before;
      const Vec2 start_b = point - vb * before;
      if (!sa.contains(start_a) || !sa.contains(start_a + va * last)) continue;
      if (!sb.contains(start_b) || !sb.contains(start_b + vb * last)) continue;
      emit_linear(a, sa, start_a, va);
      emit_linear(b, sb, start_b, vb);
      seq.crossings.push_back({meet, a, b});
      placed = true;
    }
    if (!placed) throw std::invalid_argument("scenario: could not place crossing pair");
  }

  for (TrackId id = 2 * cfg.crossings + 1; id <= cfg.num_objects; ++id) {
    const auto shape = detail::sample_shape(rng, cfg);
    bool placed = false;
    for (int attempt = 0; attempt < detail::kMaxAttempts && !placed; ++attempt) {
      const Vec2 vel = detail::sample_velocity(rng, cfg);
      const double turn = rng.uniform(-cfg.turn_rate_max, cfg.turn_rate_max);
      if (turn != 0.0) {
        const Vec2 start{rng.uniform(shape.xlo, shape.xhi), rng.uniform(shape.ylo, shape.yhi)};
        Vec2 c = start;
        double heading = std::atan2(vel.y, vel.x);
        for (Frame f = 1; f <= cfg.num_frames; ++f) {
          seq.gt.push_back({f, id, Box::from_center(c, shape.w, shape.h), 1.0});
          heading += turn;
          c = c + Vec2{std::cos(heading), std::sin(heading)} * vel.norm();
          c.x = std::clamp(c.x, shape.xlo, shape.xhi);
          c.y = std::clamp(c.y, shape.ylo, shape.yhi);
        }
        placed = true;
        continue;
      }
      // Starts for which both ends of the straight path stay inside.
      const double dx = vel.x * last, dy = vel.y * last;
      const double x0 = std::max(shape.xlo, shape.xlo - dx), x1 = std::min(shape.xhi, shape.xhi - dx);
      const double y0 = std::max(shape.ylo, shape.ylo - dy), y1 = std::min(shape.yhi, shape.yhi - dy);
      if (x0 > x1 || y0 > y1) continue;
      emit_linear(id, shape, {rng.uniform(x0, x1), rng.uniform(y0, y1)}, vel);
      placed = true;
    }
    if (!placed) throw std::invalid_argument("scenario: could not place object " + std::to_string(id));
  }
  return seq;
}

struct CorruptionConfig {
  int fragments_per_trajectory{1};     // forced fragments per trajectory, spread along it
  int fragment_gap_min{0};             // detections removed before each forced cut
  int fragment_gap_max{0};
  int min_fragment_length{10};
  double fragment_probability{0.0};    // per trajectory per crossing: cut at the crossing frame
  double swap_probability{0.0};        // per crossing: exchange identities from the crossing frame on
  double dropout_rate{0.0};            // per detection
  std::uint64_t seed{1};

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(fragment_probability) || !prob(swap_probability) || !prob(dropout_rate)) {
      throw std::invalid_argument("corruption: probabilities must lie in [0, 1]");
    }
    if (fragments_per_trajectory < 1 || fragment_gap_min < 0 || fragment_gap_max < fragment_gap_min ||
        min_fragment_length < 1) {
      throw std::invalid_argument("corruption: invalid fragmentation parameters");
    }
  }
};

enum class CorruptionKind { Fragment, Swap, Dropout };

inline std::string_view to_string(CorruptionKind k) {
  switch (k) {
    case CorruptionKind::Fragment: return "fragment";
    case CorruptionKind::Swap: return "swap";
    case CorruptionKind::Dropout: return "dropout";
  }
  return "?";
}

// Fragment: gt_id's output label changes from old_label to new_label at `frame`;
//   `prev_frame` is the last frame kept under old_label.
// Swap: gt_id and other_gt exchange labels from `frame` on.
// Dropout: the detection of gt_id at `frame` (label old_label) was removed.
struct CorruptionEvent {
  CorruptionKind kind{CorruptionKind::Fragment};
  Frame frame{1};
  TrackId gt_id{0};
  TrackId other_gt{0};
  Frame prev_frame{0};
  TrackId old_label{0};
  TrackId new_label{0};
};

struct CorruptedSequence {
  std::vector<Detection> detections;
  std::vector<CorruptionEvent> log;
};

// Labels are assigned fresh (1, 2, ...) per fragment in order of gt id. Swaps
// are applied after fragmentation, dropout last.
inline CorruptedSequence corrupt(const SynthSequence& seq, const CorruptionConfig& cfg) {
  cfg.validate();
  detail::SynthRng rng(cfg.seed);

  std::map<TrackId, std::vector<Detection>> objects;
  for (const auto& d : seq.gt) objects[d.track_id].push_back(d);
  for (auto& [_, dets] : objects) {
    std::sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
  }
  std::map<TrackId, std::vector<Frame>> crossing_frames;
  for (const auto& c : seq.crossings) {
    crossing_frames[c.a].push_back(c.frame);
    crossing_frames[c.b].push_back(c.frame);
  }

  CorruptedSequence out;
  TrackId next_label = 1;
  std::map<TrackId, std::vector<Detection>> labelled;  // gt id -> detections with labels

  for (auto& [gt_id, dets] : objects) {
    const int n = static_cast<int>(dets.size());
    // Cut positions are indices of the detection heading a new fragment.
    std::vector<int> cuts;
    const int k = cfg.fragments_per_trajectory;
    if (k > 1) {
      if (n < k * (cfg.min_fragment_length + cfg.fragment_gap_max)) {
        throw std::invalid_argument("corruption: trajectory " + std::to_string(gt_id) +
                                    " too short for the requested fragments");
      }
      const double len = static_cast<double>(n) / k;
      const double slack = (len - cfg.min_fragment_length - cfg.fragment_gap_max) / 2.0;
      const int jitter = static_cast<int>(std::max(0.0, std::min(len / 4.0, slack)));
      for (int i = 1; i < k; ++i) {
        const int nominal = static_cast<int>(std::lround(i * len));
        cuts.push_back(nominal + (jitter > 0 ? rng.uniform_int(-jitter, jitter) : 0));
      }
    }
    if (const auto it = crossing_frames.find(gt_id); it != crossing_frames.end()) {
      for (const Frame f : it->second) {
        if (!rng.bernoulli(cfg.fragment_probability)) continue;
        const auto pos = std::find_if(dets.begin(), dets.end(), [&](const Detection& d) { return d.frame >= f; });
        if (pos != dets.begin() && pos != dets.end()) cuts.push_back(static_cast<int>(pos - dets.begin()));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Detection> kept;
    std::vector<bool> removed(dets.size(), false);
    TrackId label = next_label++;
    std::size_t cut_i = 0;
    for (int i = 0; i < n; ++i) {
      if (cut_i < cuts.size() && cuts[cut_i] == i) {
        ++cut_i;
        const bool forced = k > 1;
        const int gap = forced ? rng.uniform_int(cfg.fragment_gap_min, cfg.fragment_gap_max) : 0;
        // Drop up to `gap` detections already kept under the current label.
        int dropped = 0;
        while (dropped < gap && kept.size() > 1 && kept.back().track_id == label) {
          kept.pop_back();
          ++dropped;
        }
        const TrackId fresh = next_label++;
        const Frame prev = (!kept.empty() && kept.back().track_id == label) ? kept.back().frame : 0;
        out.log.push_back({CorruptionKind::Fragment, dets[i].frame, gt_id, 0, prev, label, fresh});
        label = fresh;
      }
      Detection d = dets[i];
      d.track_id = label;
      kept.push_back(d);
    }
    labelled[gt_id] = std::move(kept);
  }

  for (const auto& c : seq.crossings) {
    if (!rng.bernoulli(cfg.swap_probability)) continue;
    auto& da = labelled[c.a];
    auto& db = labelled[c.b];
    // Label carried by an object at frame f: the label of its latest detection
    // at or before f (or its first detection).
    auto label_at = [](const std::vector<Detection>& dets, Frame f) {
      TrackId l = dets.empty() ? 0 : dets.front().track_id;
      for (const auto& d : dets) {
        if (d.frame > f) break;
        l = d.track_id;
      }
      return l;
    };
    std::vector<TrackId> new_a, new_b;
    for (const auto& d : da) new_a.push_back(d.frame >= c.frame ? label_at(db, d.frame) : d.track_id);
    for (const auto& d : db) new_b.push_back(d.frame >= c.frame ? label_at(da, d.frame) : d.track_id);
    for (std::size_t i = 0; i < da.size(); ++i) da[i].track_id = new_a[i];
    for (std::size_t i = 0; i < db.size(); ++i) db[i].track_id = new_b[i];
    out.log.push_back({CorruptionKind::Swap, c.frame, c.a, c.b, 0, 0, 0});
  }

  for (auto& [gt_id, dets] : labelled) {
    for (const auto& d : dets) {
      if (rng.bernoulli(cfg.dropout_rate)) {
        out.log.push_back({CorruptionKind::Dropout, d.frame, gt_id, 0, 0, d.track_id, 0});
        continue;
      }
      out.detections.push_back(d);
    }
  }
  return out;
}

inline void write_corruption_log(std::ostream& out, const std::vector<CorruptionEvent>& log) {
  out << "kind\tframe\tgt_id\tother_gt\tprev_frame\told_label\tnew_label\n";
  for (const auto& e : log) {
    out << to_string(e.kind) << '\t' << e.frame << '\t' << e.gt_id << '\t' << e.other_gt << '\t'
        << e.prev_frame << '\t' << e.old_label << '\t' << e.new_label << '\n';
  }
}

}  // namespace tracklet_assoc
