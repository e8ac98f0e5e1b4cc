#pragma once

// Pairwise tracklet distances turned into bounded Gaussian scores, and the
// normalized per-tracklet marginals built from their products.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tracklet_assoc/tracklet_model.hpp"
#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

enum class ConstraintKind {
  TimeDistance,
  AngleDifference,
  SpeedNormDifference,
  PredictedIOU,
  PredictedCenterDistance,
};

inline constexpr std::size_t kConstraintCount = 5;

inline constexpr std::array<ConstraintKind, kConstraintCount> kAllConstraints{
    ConstraintKind::TimeDistance, ConstraintKind::AngleDifference,
    ConstraintKind::SpeedNormDifference, ConstraintKind::PredictedIOU,
    ConstraintKind::PredictedCenterDistance};

// Frame rate the time and speed thresholds are expressed in.
inline constexpr double kReferenceFps = 30.0;

constexpr std::size_t index_of(ConstraintKind k) { return static_cast<std::size_t>(k); }

// Short key used in config files and candidate dumps.
constexpr std::string_view key_of(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::TimeDistance: return "td";
    case ConstraintKind::AngleDifference: return "ad";
    case ConstraintKind::SpeedNormDifference: return "sd";
    case ConstraintKind::PredictedIOU: return "piou";
    case ConstraintKind::PredictedCenterDistance: return "pcd";
  }
  return "?";
}

// Thresholds are in the distance units of the constraint: reference frames for
// td, radians for ad, diagonal fractions per reference frame for sd, 1 - IoU for
// piou and diagonal fractions for pcd.
struct ConstraintParams {
  bool enabled{false};
  double t50{1.0};                // distance scored exactly 0.5
  double tend{1.0};               // distance assigned to the STOP candidate
  std::optional<double> t0{};     // candidates at or beyond this distance are filtered out
};

struct ScoreBounds {
  double lower{1e-6};
  double upper{1.0 - 1e-6};
};

struct ScoreConfig {
  std::array<ConstraintParams, kConstraintCount> constraints{};
  ScoreBounds bounds{};

  ConstraintParams& operator[](ConstraintKind k) { return constraints[index_of(k)]; }
  const ConstraintParams& operator[](ConstraintKind k) const { return constraints[index_of(k)]; }

  // Tuned configuration: td 1/3, pcd 0.02/2, piou 0.75 IoU / 2, ad and sd off,
  // no T0 filtering.
  static ScoreConfig defaults() {
    ScoreConfig cfg;
    cfg[ConstraintKind::TimeDistance] = {true, 1.0, 3.0, std::nullopt};
    cfg[ConstraintKind::AngleDifference] = {false, std::numbers::pi / 4.0, std::numbers::pi / 2.0,
                                            std::nullopt};
    cfg[ConstraintKind::SpeedNormDifference] = {false, 0.001, 0.003, std::nullopt};
    cfg[ConstraintKind::PredictedIOU] = {true, 1.0 - 0.75, 2.0, std::nullopt};
    cfg[ConstraintKind::PredictedCenterDistance] = {true, 0.02, 2.0, std::nullopt};
    return cfg;
  }

  void validate() const {
    if (!(bounds.lower > 0.0 && bounds.lower < 0.5 && bounds.upper > 0.5 && bounds.upper < 1.0)) {
      throw std::invalid_argument("score bounds must satisfy 0 < L < 0.5 < U < 1");
    }
    for (const auto k : kAllConstraints) {
      const auto& p = (*this)[k];
      const std::string name(key_of(k));
      if (!(p.t50 > 0.0)) throw std::invalid_argument(name + ".t50 must be positive");
      if (!(p.tend > 0.0)) throw std::invalid_argument(name + ".tend must be positive");
      if (p.t0 && !(*p.t0 > p.t50)) throw std::invalid_argument(name + ".t0 must exceed t50");
    }
  }
};

// exp(-c^2 / (2 sigma^2)) with sigma = T50 / sqrt(2 ln 2), i.e. 2^-(c/T50)^2,
// clamped to [L, U]; exactly 0 at or beyond T0.
inline double gaussian_score(double c, const ConstraintParams& p, const ScoreBounds& bounds) {
  if (p.t0 && c >= *p.t0) return 0.0;
  const double r = c / p.t50;
  const double s = std::exp2(-r * r);
  return std::clamp(s, bounds.lower, bounds.upper);
}

// STOP is scored at Tend and never filtered.
inline double stop_score(ConstraintKind kind, const ScoreConfig& cfg) {
  ConstraintParams p = cfg[kind];
  p.t0.reset();
  return gaussian_score(p.tend, p, cfg.bounds);
}

namespace detail {

inline double angle_between(Vec2 a, Vec2 b) {
  if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0)) return 0.0;
  const double cross = a.x * b.y - a.y * b.x;
  const double dot = a.x * b.x + a.y * b.y;
  return std::atan2(std::abs(cross), dot);
}

// End box of t moved by its end velocity onto the first frame of s.
inline Box predicted_box(const Tracklet& t, const Tracklet& s) {
  const double dt = static_cast<double>(s.start.frame - t.end.frame);
  return t.end.box.translated(t.end.velocity * dt);
}

}  // namespace detail

inline double pair_distance(ConstraintKind kind, const Tracklet& t, const Tracklet& s,
                            const SequenceMeta& meta) {
  if (!(t.end.frame < s.start.frame)) {
    throw std::logic_error("pair_distance requires the predecessor to end before the successor starts");
  }
  switch (kind) {
    case ConstraintKind::TimeDistance:
      return static_cast<double>(s.start.frame - t.end.frame) * (kReferenceFps / meta.fps);
    case ConstraintKind::AngleDifference:
      return detail::angle_between(t.end.velocity, s.start.velocity);
    case ConstraintKind::SpeedNormDifference:
      return std::abs(s.start.velocity.norm() - t.end.velocity.norm()) *
             (meta.fps / kReferenceFps) / meta.diagonal();
    case ConstraintKind::PredictedIOU:
      return 1.0 - iou(detail::predicted_box(t, s), s.start.box);
    case ConstraintKind::PredictedCenterDistance:
      return (detail::predicted_box(t, s).center() - s.start.box.center()).norm() / meta.diagonal();
  }
  throw std::logic_error("unknown constraint kind");
}

// Successor value of a variable: another tracklet, or the variable's own STOP.
// Ordered by tracklet id with STOP last.
struct Successor {
  static constexpr TrackId kStopValue = 0;
  TrackId id{kStopValue};

  static constexpr Successor stop() { return {}; }
  static constexpr Successor of(TrackId id) { return {id}; }
  constexpr bool is_stop() const { return id == kStopValue; }

  friend constexpr bool operator==(Successor, Successor) = default;
  friend constexpr bool operator<(Successor a, Successor b) {
    if (a.is_stop() != b.is_stop()) return b.is_stop();
    return a.id < b.id;
  }
};

inline std::string to_string(Successor s) { return s.is_stop() ? "STOP" : std::to_string(s.id); }

struct PairScores {
  TrackId predecessor{0};
  Successor successor{};
  std::array<std::optional<double>, kConstraintCount> scores{};  // set for enabled constraints
  double product{1.0};
};

inline PairScores score_pair(const Tracklet& t, const Tracklet& s, const ScoreConfig& cfg,
                             const SequenceMeta& meta) {
  PairScores ps{t.id, Successor::of(s.id), {}, 1.0};
  for (const auto k : kAllConstraints) {
    const auto& p = cfg[k];
    if (!p.enabled) continue;
    const double score = gaussian_score(pair_distance(k, t, s, meta), p, cfg.bounds);
    ps.scores[index_of(k)] = score;
    ps.product *= score;
  }
  return ps;
}

inline PairScores score_stop(const Tracklet& t, const ScoreConfig& cfg) {
  PairScores ps{t.id, Successor::stop(), {}, 1.0};
  for (const auto k : kAllConstraints) {
    if (!cfg[k].enabled) continue;
    const double score = stop_score(k, cfg);
    ps.scores[index_of(k)] = score;
    ps.product *= score;
  }
  return ps;
}

// Products normalized to sum to one. Zero products are left at 0 (they are not
// part of the domain). Sums in the given order.
inline std::vector<double> normalize_products(std::span<const double> products) {
  double total = 0.0;
  for (const double p : products) {
    if (p < 0.0) throw std::invalid_argument("score products must be non-negative");
    total += p;
  }
  if (!(total > 0.0)) throw std::logic_error("marginals: every candidate has a zero product");
  std::vector<double> out;
  out.reserve(products.size());
  for (const double p : products) out.push_back(p / total);
  return out;
}

inline std::map<Successor, double> marginals(std::span<const PairScores> candidates) {
  std::vector<double> products;
  products.reserve(candidates.size());
  for (const auto& c : candidates) products.push_back(c.product);
  const auto m = normalize_products(products);
  std::map<Successor, double> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].product > 0.0) out[candidates[i].successor] = m[i];
  }
  return out;
}

}  // namespace tracklet_assoc
