#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "tracklet_assoc.hpp"

using namespace tracklet_assoc;

namespace {

std::set<TrackId> ids_of(const std::vector<Detection>& dets) {
  std::set<TrackId> out;
  for (const auto& d : dets) out.insert(d.track_id);
  return out;
}

SynthSequence small_scene() {
  ScenarioConfig sc;
  sc.num_objects = 6;
  sc.num_frames = 200;
  sc.seed = 3;
  return generate(sc);
}

}  // namespace

TEST(Config, DefaultsReproduceTunedValues) {
  const PipelineConfig cfg;
  EXPECT_TRUE(cfg.cutter.enabled);
  EXPECT_EQ(cfg.cutter.t_tc, 0.5);
  EXPECT_TRUE(cfg.interpolation.enabled);
  EXPECT_EQ(cfg.interpolation.max_gap_size, 42);
  EXPECT_EQ(cfg.endpoints.window, 6u);
  EXPECT_EQ(cfg.endpoints.min_length, 10u);
}

TEST(Config, WriteThenReadIsIdentity) {
  PipelineConfig cfg;
  cfg.scores[ConstraintKind::AngleDifference].enabled = true;
  cfg.scores[ConstraintKind::TimeDistance].t0 = 7.5;
  cfg.cutter.t_tc = 0.3;
  cfg.interpolation.max_gap_size = 10;
  std::stringstream io;
  write_pipeline_config(io, cfg);
  const auto back = read_pipeline_config(io);
  std::stringstream a, b;
  write_pipeline_config(a, cfg);
  write_pipeline_config(b, back);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(back.scores[ConstraintKind::TimeDistance].t0, 7.5);
}

TEST(Config, ParsesOverridesAndRejectsUnknownKeys) {
  std::istringstream in("# comment\ntd.t50 = 2   # trailing\npiou.enabled=false\ninterp.enabled = off\n");
  const auto cfg = read_pipeline_config(in);
  EXPECT_EQ(cfg.scores[ConstraintKind::TimeDistance].t50, 2.0);
  EXPECT_FALSE(cfg.scores[ConstraintKind::PredictedIOU].enabled);
  EXPECT_FALSE(cfg.interpolation.enabled);

  std::istringstream unknown("td.t51 = 2\n");
  EXPECT_THROW(read_pipeline_config(unknown), ParseError);
  std::istringstream bad("td.t50 = abc\n");
  EXPECT_THROW(read_pipeline_config(bad), ParseError);
  std::istringstream invalid("td.t50 = -1\n");
  EXPECT_THROW(read_pipeline_config(invalid), std::invalid_argument);
}

TEST(Config, SynthKeys) {
  std::istringstream in("scenario.num_objects = 3\nscenario.seed = 42\ncorruption.dropout_rate = 0.2\n");
  const auto cfg = read_synth_config(in);
  EXPECT_EQ(cfg.scenario.num_objects, 3);
  EXPECT_EQ(cfg.scenario.seed, 42u);
  EXPECT_EQ(cfg.corruption.dropout_rate, 0.2);
}

TEST(Refine, EmptyInput) {
  const auto r = refine({}, {}, PipelineConfig{});
  EXPECT_TRUE(r.detections.empty());
  EXPECT_EQ(r.summary.tracklets_in, 0u);
  EXPECT_EQ(r.summary.trajectories_out, 0u);
  EXPECT_EQ(r.summary.detections_interpolated, 0u);
}

TEST(Refine, OptionalModulesOffOnlyReassociates) {
  const auto seq = small_scene();
  CorruptionConfig cc;
  cc.fragments_per_trajectory = 2;
  cc.fragment_gap_min = cc.fragment_gap_max = 1;
  const auto corrupted = corrupt(seq, cc);
  PipelineConfig cfg;
  cfg.cutter.enabled = false;
  cfg.interpolation.enabled = false;
  const auto r = refine(corrupted.detections, seq.meta, cfg);
  EXPECT_EQ(r.summary.cuts, 0u);
  EXPECT_EQ(r.summary.detections_interpolated, 0u);
  EXPECT_EQ(r.detections.size(), corrupted.detections.size());
  EXPECT_EQ(r.summary.tracklets_associated, r.summary.tracklets_in);
}

TEST(Refine, MergesFragments) {
  const auto seq = small_scene();
  CorruptionConfig cc;
  cc.fragments_per_trajectory = 3;
  cc.fragment_gap_min = 1;
  cc.fragment_gap_max = 2;
  const auto corrupted = corrupt(seq, cc);
  const auto r = refine(corrupted.detections, seq.meta, PipelineConfig{});
  EXPECT_LT(ids_of(r.detections).size(), ids_of(corrupted.detections).size());
  EXPECT_GT(r.summary.links, 0u);
  EXPECT_GT(idf1(seq.gt, r.detections), idf1(seq.gt, corrupted.detections));
}

TEST(Refine, ForcedStopReproducesTracklets) {
  const auto seq = small_scene();
  CorruptionConfig cc;
  cc.fragments_per_trajectory = 2;
  cc.fragment_gap_min = cc.fragment_gap_max = 1;
  const auto corrupted = corrupt(seq, cc);
  PipelineConfig cfg;
  cfg.cutter.enabled = false;
  cfg.interpolation.enabled = false;
  // Every candidate lies at least one reference frame away, so T0 just above
  // T50 filters them all while keeping T0 > T50.
  cfg.scores[ConstraintKind::TimeDistance].t50 = 0.5;
  cfg.scores[ConstraintKind::TimeDistance].t0 = 0.5000001;
  const auto r = refine(corrupted.detections, seq.meta, cfg);
  EXPECT_EQ(r.summary.links, 0u);
  EXPECT_EQ(ids_of(r.detections).size(), ids_of(corrupted.detections).size());
  // Same partition up to relabeling.
  std::map<TrackId, TrackId> relabel;
  auto in = corrupted.detections;
  auto out = r.detections;
  auto key = [](const Detection& d) { return std::tuple(d.frame, d.box.x, d.box.y); };
  std::sort(in.begin(), in.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  std::sort(out.begin(), out.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  ASSERT_EQ(in.size(), out.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto [it, fresh] = relabel.emplace(in[i].track_id, out[i].track_id);
    EXPECT_EQ(it->second, out[i].track_id);
  }
}

TEST(Refine, CandidateDump) {
  const auto seq = small_scene();
  std::ostringstream dump;
  refine(seq.gt, seq.meta, PipelineConfig{}, &dump);
  EXPECT_EQ(dump.str().rfind("predecessor\tsuccessor", 0), 0u);
}
