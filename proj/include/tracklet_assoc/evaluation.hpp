#pragma once

// CLEAR-MOT accuracy (MOTA) and identity F1 (IDF1) against ground truth.

#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "tracklet_assoc/hungarian.hpp"
#include "tracklet_assoc/mot_io.hpp"
#include "tracklet_assoc/tracklet_model.hpp"
#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

inline constexpr double kDefaultMatchIou = 0.5;

struct ClearMotResult {
  double mota{0.0};
  std::size_t num_gt{0};
  std::size_t matches{0};
  std::size_t fp{0};
  std::size_t fn{0};
  std::size_t idsw{0};
};

struct IdentityResult {
  double idf1{0.0};
  std::size_t idtp{0};
  std::size_t idfp{0};
  std::size_t idfn{0};
};

namespace detail {

using FrameIndex = std::map<Frame, std::map<TrackId, Box>>;

inline FrameIndex index_by_frame(const std::vector<Detection>& dets, const char* what) {
  FrameIndex idx;
  for (const auto& d : dets) {
    if (!idx[d.frame].emplace(d.track_id, d.box).second) {
      throw DataError(std::string(what) + ": (" + std::to_string(d.track_id) + "," +
                      std::to_string(d.frame) + ") duplicated");
    }
  }
  return idx;
}

}  // namespace detail

// Per frame: previous correspondences are kept while their IoU stays above the
// gate, the rest is matched by maximum total IoU. A switch is counted when a
// ground-truth id is matched to a different prediction id than its last match.
inline ClearMotResult clear_mot(const std::vector<Detection>& gt, const std::vector<Detection>& pred,
                                double iou_thresh = kDefaultMatchIou) {
  if (gt.empty()) throw DataError("MOTA is undefined for empty ground truth");
  const auto gt_idx = detail::index_by_frame(gt, "ground truth");
  const auto pred_idx = detail::index_by_frame(pred, "prediction");

  std::set<Frame> frames;
  for (const auto& [f, _] : gt_idx) frames.insert(f);
  for (const auto& [f, _] : pred_idx) frames.insert(f);

  static const std::map<TrackId, Box> kEmpty;
  ClearMotResult r;
  r.num_gt = gt.size();
  std::map<TrackId, TrackId> last_match;
  std::map<TrackId, TrackId> prev_frame;
  for (const Frame f : frames) {
    const auto git = gt_idx.find(f);
    const auto pit = pred_idx.find(f);
    const auto& g = git == gt_idx.end() ? kEmpty : git->second;
    const auto& p = pit == pred_idx.end() ? kEmpty : pit->second;

    std::map<TrackId, TrackId> matches;
    std::set<TrackId> used_pred;
    for (const auto& [gid, pid] : prev_frame) {
      const auto gb = g.find(gid);
      const auto pb = p.find(pid);
      if (gb == g.end() || pb == p.end()) continue;
      if (iou(gb->second, pb->second) < iou_thresh) continue;
      matches[gid] = pid;
      used_pred.insert(pid);
    }

    std::vector<TrackId> gids, pids;
    for (const auto& [gid, _] : g) if (!matches.contains(gid)) gids.push_back(gid);
    for (const auto& [pid, _] : p) if (!used_pred.contains(pid)) pids.push_back(pid);
    if (!gids.empty() && !pids.empty()) {
      std::vector<std::vector<double>> cost(gids.size(), std::vector<double>(pids.size(), 0.0));
      for (std::size_t i = 0; i < gids.size(); ++i) {
        for (std::size_t j = 0; j < pids.size(); ++j) {
          const double o = iou(g.at(gids[i]), p.at(pids[j]));
          if (o >= iou_thresh) cost[i][j] = -o;
        }
      }
      const auto sol = solve_assignment(cost);
      for (std::size_t i = 0; i < gids.size(); ++i) {
        if (sol[i] < 0) continue;
        const TrackId pid = pids[static_cast<std::size_t>(sol[i])];
        if (iou(g.at(gids[i]), p.at(pid)) >= iou_thresh) matches[gids[i]] = pid;
      }
    }

    for (const auto& [gid, pid] : matches) {
      const auto it = last_match.find(gid);
      if (it != last_match.end() && it->second != pid) ++r.idsw;
      last_match[gid] = pid;
    }
    r.matches += matches.size();
    r.fn += g.size() - matches.size();
    r.fp += p.size() - matches.size();
    prev_frame = std::move(matches);
  }
  r.mota = 1.0 - static_cast<double>(r.fp + r.fn + r.idsw) / static_cast<double>(r.num_gt);
  return r;
}

// Global one-to-one correspondence between ground-truth and predicted ids that
// maximizes the number of IoU-gated co-occurring detections.
inline IdentityResult identity_metrics(const std::vector<Detection>& gt,
                                       const std::vector<Detection>& pred,
                                       double iou_thresh = kDefaultMatchIou) {
  if (gt.empty()) throw DataError("IDF1 is undefined for empty ground truth");
  const auto gt_idx = detail::index_by_frame(gt, "ground truth");
  const auto pred_idx = detail::index_by_frame(pred, "prediction");

  std::map<TrackId, std::size_t> gid_pos, pid_pos;
  for (const auto& d : gt) gid_pos.emplace(d.track_id, 0);
  for (const auto& d : pred) pid_pos.emplace(d.track_id, 0);
  std::size_t k = 0;
  for (auto& [_, pos] : gid_pos) pos = k++;
  k = 0;
  for (auto& [_, pos] : pid_pos) pos = k++;

  std::vector<std::vector<double>> cost(gid_pos.size(), std::vector<double>(pid_pos.size(), 0.0));
  for (const auto& [f, g] : gt_idx) {
    const auto pit = pred_idx.find(f);
    if (pit == pred_idx.end()) continue;
    for (const auto& [gid, gb] : g) {
      for (const auto& [pid, pb] : pit->second) {
        if (iou(gb, pb) >= iou_thresh) cost[gid_pos[gid]][pid_pos[pid]] -= 1.0;
      }
    }
  }

  IdentityResult r;
  if (!pid_pos.empty()) {
    const auto sol = solve_assignment(cost);
    for (std::size_t i = 0; i < sol.size(); ++i) {
      if (sol[i] >= 0) r.idtp += static_cast<std::size_t>(-cost[i][static_cast<std::size_t>(sol[i])]);
    }
  }
  r.idfn = gt.size() - r.idtp;
  r.idfp = pred.size() - r.idtp;
  r.idf1 = 2.0 * static_cast<double>(r.idtp) / static_cast<double>(gt.size() + pred.size());
  return r;
}

inline double mota(const std::vector<Detection>& gt, const std::vector<Detection>& pred,
                   double iou_thresh = kDefaultMatchIou) {
  return clear_mot(gt, pred, iou_thresh).mota;
}

inline double idf1(const std::vector<Detection>& gt, const std::vector<Detection>& pred,
                   double iou_thresh = kDefaultMatchIou) {
  return identity_metrics(gt, pred, iou_thresh).idf1;
}

struct MetricsReport {
  std::string sequence;
  ClearMotResult clear;
  IdentityResult identity;
};

inline MetricsReport evaluate(std::string sequence, const std::vector<Detection>& gt,
                              const std::vector<Detection>& pred,
                              double iou_thresh = kDefaultMatchIou) {
  return {std::move(sequence), clear_mot(gt, pred, iou_thresh), identity_metrics(gt, pred, iou_thresh)};
}

inline void write_report(std::ostream& out, const MetricsReport& r) {
  out << "sequence=" << r.sequence << '\n'
      << "MOTA=" << detail::format_number(r.clear.mota) << '\n'
      << "IDF1=" << detail::format_number(r.identity.idf1) << '\n'
      << "FP=" << r.clear.fp << '\n'
      << "FN=" << r.clear.fn << '\n'
      << "IDSW=" << r.clear.idsw << '\n'
      << "IDTP=" << r.identity.idtp << '\n'
      << "IDFP=" << r.identity.idfp << '\n'
      << "IDFN=" << r.identity.idfn << '\n';
}

inline void write_report_header(std::ostream& out) { out << "sequence,MOTA,IDF1,FP,FN,IDSW\n"; }

inline void write_report_row(std::ostream& out, const MetricsReport& r) {
  out << r.sequence << ',' << detail::format_number(r.clear.mota) << ','
      << detail::format_number(r.identity.idf1) << ',' << r.clear.fp << ',' << r.clear.fn << ','
      << r.clear.idsw << '\n';
}

}  // namespace tracklet_assoc
