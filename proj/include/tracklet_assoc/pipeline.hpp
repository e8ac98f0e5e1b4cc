#pragma once

// Cutter -> associator -> interpolation over one sequence.

#include <chrono>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "tracklet_assoc/associator.hpp"
#include "tracklet_assoc/interpolate.hpp"
#include "tracklet_assoc/mot_io.hpp"
#include "tracklet_assoc/scoring.hpp"
#include "tracklet_assoc/tracklet_model.hpp"
#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

struct CutterConfig {
  bool enabled{true};
  double t_tc{0.5};
};

struct InterpolationConfig {
  bool enabled{true};
  int max_gap_size{42};
};

struct PipelineConfig {
  ScoreConfig scores{ScoreConfig::defaults()};
  CutterConfig cutter{};
  InterpolationConfig interpolation{};
  EndpointConfig endpoints{};

  void validate() const {
    scores.validate();
    endpoints.validate();
    if (!(cutter.t_tc > 0.0 && cutter.t_tc <= 1.0)) throw std::invalid_argument("cutter.t_tc must lie in (0, 1]");
    if (interpolation.max_gap_size < 1) throw std::invalid_argument("interp.max_gap_size must be positive");
  }
};

struct RefineSummary {
  std::size_t detections_in{0};
  std::size_t tracklets_in{0};
  std::size_t cuts{0};
  std::size_t tracklets_associated{0};  // after cutting
  std::size_t links{0};                 // non-STOP successor choices
  std::size_t trajectories_out{0};
  std::size_t detections_interpolated{0};
  std::size_t search_nodes{0};
  std::size_t search_failures{0};
  double wall_seconds{0.0};
};

struct RefineResult {
  std::vector<Detection> detections;
  RefineSummary summary;
};

inline RefineResult refine(const std::vector<Detection>& input, const SequenceMeta& meta,
                           const PipelineConfig& cfg, std::ostream* candidate_dump = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  meta.validate();

  RefineResult result;
  auto& s = result.summary;
  s.detections_in = input.size();

  auto tracklets = group_tracklets(input, cfg.endpoints);
  s.tracklets_in = tracklets.size();
  if (cfg.cutter.enabled) {
    auto cut = cut_tracklets_counted(tracklets, cfg.cutter.t_tc, cfg.endpoints);
    s.cuts = cut.cuts;
    tracklets = std::move(cut.tracklets);
  }
  s.tracklets_associated = tracklets.size();

  const auto vars = build_domains(tracklets, cfg.scores, meta);
  if (candidate_dump) write_candidate_table(*candidate_dump, vars);
  SearchStats stats;
  const Assignment assignment = solve(vars, &stats);
  s.search_nodes = stats.nodes;
  s.search_failures = stats.failures;
  for (const auto& [_, succ] : assignment) s.links += succ.is_stop() ? 0 : 1;

  auto trajectories = stitch(assignment, tracklets, cfg.endpoints);
  s.trajectories_out = trajectories.size();
  if (cfg.interpolation.enabled) {
    s.detections_interpolated =
        fill_trajectories(trajectories, cfg.interpolation.max_gap_size, cfg.endpoints);
  }
  result.detections = flatten(trajectories);
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

inline void write_summary(std::ostream& out, const RefineSummary& s) {
  out << "detections_in=" << s.detections_in << '\n'
      << "tracklets_in=" << s.tracklets_in << '\n'
      << "cuts=" << s.cuts << '\n'
      << "tracklets_associated=" << s.tracklets_associated << '\n'
      << "links=" << s.links << '\n'
      << "trajectories_out=" << s.trajectories_out << '\n'
      << "detections_interpolated=" << s.detections_interpolated << '\n'
      << "search_nodes=" << s.search_nodes << '\n'
      << "search_failures=" << s.search_failures << '\n'
      << "wall_seconds=" << s.wall_seconds << '\n';
}

}  // namespace tracklet_assoc
