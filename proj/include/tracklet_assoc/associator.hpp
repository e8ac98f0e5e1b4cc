#pragma once

// Tracklet association as a constraint satisfaction problem: one successor
// variable per tracklet, allDifferent over non-STOP values, strict temporal
// order between a tracklet and its successor. Solved by depth-first search
// branching on the globally largest marginal, stopping at the first complete
// assignment.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracklet_assoc/mot_io.hpp"
#include "tracklet_assoc/scoring.hpp"
#include "tracklet_assoc/tracklet_model.hpp"
#include "tracklet_assoc/types.hpp"

namespace tracklet_assoc {

struct Candidate {
  Successor value{};
  double product{1.0};
  double marginal{0.0};
  std::array<std::optional<double>, kConstraintCount> scores{};
};

// Domain is ordered by successor id with STOP last.
struct SuccessorVar {
  TrackId tracklet{0};
  std::vector<Candidate> domain;
};

using Assignment = std::map<TrackId, Successor>;

inline void attach_marginals(SuccessorVar& var) {
  std::vector<double> products;
  products.reserve(var.domain.size());
  for (const auto& c : var.domain) products.push_back(c.product);
  const auto m = normalize_products(products);
  for (std::size_t i = 0; i < var.domain.size(); ++i) var.domain[i].marginal = m[i];
}

inline std::vector<SuccessorVar> build_domains(const std::vector<Tracklet>& tracklets,
                                               const ScoreConfig& cfg, const SequenceMeta& meta) {
  std::vector<const Tracklet*> sorted;
  sorted.reserve(tracklets.size());
  for (const auto& t : tracklets) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const Tracklet* a, const Tracklet* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->id == sorted[i - 1]->id) {
      throw DataError("duplicate tracklet id " + std::to_string(sorted[i]->id));
    }
  }

  std::vector<SuccessorVar> vars;
  vars.reserve(sorted.size());
  for (const Tracklet* t : sorted) {
    SuccessorVar var{t->id, {}};
    for (const Tracklet* s : sorted) {
      if (!(t->end.frame < s->start.frame)) continue;
      const PairScores ps = score_pair(*t, *s, cfg, meta);
      if (ps.product <= 0.0) continue;
      var.domain.push_back({ps.successor, ps.product, 0.0, ps.scores});
    }
    const PairScores stop = score_stop(*t, cfg);
    var.domain.push_back({stop.successor, stop.product, 0.0, stop.scores});
    attach_marginals(var);
    vars.push_back(std::move(var));
  }
  return vars;
}

struct SearchStats {
  std::size_t nodes{0};
  std::size_t failures{0};  // domain wipe-outs
};

namespace detail {

class MaxMarginalSearch {
 public:
  explicit MaxMarginalSearch(const std::vector<SuccessorVar>& vars) : vars_(vars) {
    const std::size_t n = vars_.size();
    live_.resize(n);
    live_count_.assign(n, 0);
    sum_.assign(n, 0.0);
    dirty_.assign(n, true);
    bound_.assign(n, std::nullopt);
    order_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto& dom = vars_[v].domain;
      live_[v].assign(dom.size(), false);
      for (std::size_t c = 0; c < dom.size(); ++c) {
        if (!(dom[c].product > 0.0)) continue;
        live_[v][c] = true;
        ++live_count_[v];
        order_[v].push_back(c);
        if (!dom[c].value.is_stop()) occurrences_[dom[c].value.id].emplace_back(v, c);
      }
      std::stable_sort(order_[v].begin(), order_[v].end(), [&](std::size_t a, std::size_t b) {
        if (dom[a].product != dom[b].product) return dom[a].product > dom[b].product;
        return dom[a].value < dom[b].value;
      });
    }
  }

  std::optional<Assignment> run(SearchStats& stats) {
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (live_count_[v] == 0) return std::nullopt;
    }
    if (!search(stats)) return std::nullopt;
    Assignment out;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      out[vars_[v].tracklet] = vars_[v].domain[*bound_[v]].value;
    }
    return out;
  }

 private:
  struct Choice {
    std::size_t var;
    std::size_t cand;
    double marginal;
  };

  double live_sum(std::size_t v) {
    if (dirty_[v]) {
      double s = 0.0;
      const auto& dom = vars_[v].domain;
      for (std::size_t c = 0; c < dom.size(); ++c) {
        if (live_[v][c]) s += dom[c].product;
      }
      sum_[v] = s;
      dirty_[v] = false;
    }
    return sum_[v];
  }

  // Variables are ordered by tracklet id, so a strict comparison keeps the
  // smaller predecessor on ties; within a variable `order_` breaks ties.
  std::optional<Choice> select() {
    std::optional<Choice> best;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (bound_[v]) continue;
      for (const std::size_t c : order_[v]) {
        if (!live_[v][c]) continue;
        const double m = vars_[v].domain[c].product / live_sum(v);
        if (!best || m > best->marginal) best = Choice{v, c, m};
        break;
      }
    }
    return best;
  }

  void remove(std::size_t v, std::size_t c) {
    live_[v][c] = false;
    --live_count_[v];
    dirty_[v] = true;
    trail_.emplace_back(v, c);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto [v, c] = trail_.back();
      trail_.pop_back();
      live_[v][c] = true;
      ++live_count_[v];
      dirty_[v] = true;
    }
  }

  // Binds and forward-checks allDifferent; false on a wipe-out.
  bool bind(std::size_t v, std::size_t c) {
    bound_[v] = c;
    const Successor value = vars_[v].domain[c].value;
    if (value.is_stop()) return true;
    bool ok = true;
    for (const auto& [w, d] : occurrences_[value.id]) {
      if (w == v || bound_[w] || !live_[w][d]) continue;
      remove(w, d);
      if (live_count_[w] == 0) ok = false;
    }
    return ok;
  }

  bool search(SearchStats& stats) {
    while (true) {
      const auto choice = select();
      if (!choice) return true;
      ++stats.nodes;
      const std::size_t mark = trail_.size();
      if (bind(choice->var, choice->cand) && search(stats)) return true;
      ++stats.failures;
      undo_to(mark);
      bound_[choice->var].reset();
      // Refute the pair at this node; undone by the caller's undo_to.
      remove(choice->var, choice->cand);
      if (live_count_[choice->var] == 0) return false;
    }
  }

  const std::vector<SuccessorVar>& vars_;
  std::vector<std::vector<bool>> live_;
  std::vector<std::size_t> live_count_;
  std::vector<double> sum_;
  std::vector<bool> dirty_;
  std::vector<std::optional<std::size_t>> bound_;
  std::vector<std::vector<std::size_t>> order_;
  std::unordered_map<TrackId, std::vector<std::pair<std::size_t, std::size_t>>> occurrences_;
  std::vector<std::pair<std::size_t, std::size_t>> trail_;
};

}  // namespace detail

// Variables must be sorted by tracklet id (as produced by build_domains).
// Domains built by build_domains always contain STOP, so a solution exists;
// hand-built domains without STOP may be infeasible, which raises.
inline Assignment solve(const std::vector<SuccessorVar>& vars, SearchStats* stats = nullptr) {
  for (std::size_t i = 1; i < vars.size(); ++i) {
    if (!(vars[i - 1].tracklet < vars[i].tracklet)) {
      throw std::invalid_argument("solve: variables must be strictly ordered by tracklet id");
    }
  }
  SearchStats local;
  auto result = detail::MaxMarginalSearch(vars).run(stats ? *stats : local);
  if (!result) throw std::runtime_error("solve: no feasible assignment");
  return *std::move(result);
}

// Follows successor chains from every tracklet that is nobody's successor.
// Trajectories get ids 1..K in the order of their head tracklet id.
inline std::vector<Tracklet> stitch(const Assignment& assignment,
                                    const std::vector<Tracklet>& tracklets,
                                    const EndpointConfig& endpoints = {}) {
  std::map<TrackId, const Tracklet*> by_id;
  for (const auto& t : tracklets) by_id[t.id] = &t;
  std::set<TrackId> successors;
  for (const auto& [pred, succ] : assignment) {
    if (!by_id.contains(pred)) throw std::invalid_argument("stitch: unknown tracklet " + std::to_string(pred));
    if (succ.is_stop()) continue;
    if (!by_id.contains(succ.id)) throw std::invalid_argument("stitch: unknown successor " + std::to_string(succ.id));
    if (!successors.insert(succ.id).second) {
      throw std::invalid_argument("stitch: successor " + std::to_string(succ.id) + " used twice");
    }
  }

  std::vector<Tracklet> out;
  std::size_t visited = 0;
  TrackId next_id = 1;
  for (const auto& [id, head] : by_id) {
    if (successors.contains(id)) continue;
    std::vector<Detection> dets;
    for (const Tracklet* cur = head; cur != nullptr;) {
      if (!dets.empty() && !(dets.back().frame < cur->first_frame())) {
        throw std::invalid_argument("stitch: successor does not start after its predecessor ends");
      }
      dets.insert(dets.end(), cur->detections.begin(), cur->detections.end());
      ++visited;
      const auto it = assignment.find(cur->id);
      cur = (it == assignment.end() || it->second.is_stop()) ? nullptr : by_id.at(it->second.id);
    }
    out.push_back(make_tracklet(next_id++, std::move(dets), endpoints));
  }
  if (visited != tracklets.size()) throw std::invalid_argument("stitch: successor graph has a cycle");
  return out;
}

// Tab-separated candidate table; disabled constraints are printed as "-".
inline void write_candidate_table(std::ostream& out, const std::vector<SuccessorVar>& vars) {
  out << "predecessor\tsuccessor";
  for (const auto k : kAllConstraints) out << '\t' << key_of(k);
  out << "\tproduct\tmarginal\n";
  for (const auto& var : vars) {
    for (const auto& c : var.domain) {
      out << var.tracklet << '\t' << to_string(c.value);
      for (const auto& s : c.scores) out << '\t' << (s ? detail::format_number(*s) : std::string("-"));
      out << '\t' << detail::format_number(c.product) << '\t' << detail::format_number(c.marginal)
          << '\n';
    }
  }
}

}  // namespace tracklet_assoc
