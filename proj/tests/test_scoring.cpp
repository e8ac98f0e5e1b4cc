#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tracklet_assoc/scoring.hpp"

using namespace tracklet_assoc;

namespace {

const SequenceMeta kMeta{30.0, 1920, 1080, 600};

Tracklet tracklet_with(TrackId id, Frame first, Frame last, Box start_box, Vec2 start_v, Box end_box,
                       Vec2 end_v) {
  Tracklet t;
  t.id = id;
  t.detections = {{first, id, start_box, 1}, {last, id, end_box, 1}};
  t.start = {first, start_box, start_v};
  t.end = {last, end_box, end_v};
  return t;
}

// Direct evaluation with the standard-deviation form.
double gaussian_reference(double c, double t50) {
  const double sigma = t50 / std::sqrt(2.0 * std::log(2.0));
  return std::exp(-c * c / (2.0 * sigma * sigma));
}

}  // namespace

TEST(GaussianScore, CalibrationPoint) {
  const ConstraintParams p{true, 1.7, 3.0, std::nullopt};
  EXPECT_DOUBLE_EQ(gaussian_score(1.7, p, {}), 0.5);
}

TEST(GaussianScore, ZeroDistanceClampsToUpper) {
  const ScoreBounds b{};
  EXPECT_EQ(gaussian_score(0.0, {true, 1.0, 3.0, std::nullopt}, b), b.upper);
}

TEST(GaussianScore, FallsToZeroAtT0) {
  const ConstraintParams p{true, 1.0, 3.0, 2.5};
  EXPECT_EQ(gaussian_score(2.5, p, {}), 0.0);
  EXPECT_EQ(gaussian_score(7.0, p, {}), 0.0);
  EXPECT_GT(gaussian_score(2.4999, p, {}), 0.0);
}

TEST(GaussianScore, TwiceT50) {
  const ConstraintParams p{true, 0.8, 3.0, std::nullopt};
  const double s = gaussian_score(1.6, p, {1e-6, 1 - 1e-6});
  EXPECT_NEAR(s, gaussian_reference(1.6, 0.8), 1e-15);
  EXPECT_NEAR(s, 0.0625, 1e-15);
}

TEST(GaussianScore, MatchesStandardDeviationForm) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> t50d(0.01, 10.0), frac(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double t50 = t50d(rng);
    const double c = frac(rng) * t50;
    const double ref = std::clamp(gaussian_reference(c, t50), 1e-6, 1 - 1e-6);
    EXPECT_NEAR(gaussian_score(c, {true, t50, 1.0, std::nullopt}, {}), ref, 1e-12);
  }
}

TEST(GaussianScore, NonIncreasingAndInRange) {
  const ScoreBounds b{1e-3, 0.99};
  const ConstraintParams p{true, 0.5, 1.0, 1.2};
  double prev = 2.0;
  for (int i = 0; i <= 2000; ++i) {
    const double c = i * 0.001;
    const double s = gaussian_score(c, p, b);
    EXPECT_LE(s, prev);
    EXPECT_TRUE(s == 0.0 || (s >= b.lower && s <= b.upper));
    prev = s;
  }
}

TEST(StopScore, TimeDistanceDefaults) {
  const auto cfg = ScoreConfig::defaults();
  EXPECT_NEAR(stop_score(ConstraintKind::TimeDistance, cfg), std::pow(2.0, -9.0), 1e-18);
}

TEST(StopScore, CalibrationAndClamp) {
  ScoreConfig cfg = ScoreConfig::defaults();
  cfg[ConstraintKind::TimeDistance] = {true, 2.0, 2.0, 2.5};
  EXPECT_DOUBLE_EQ(stop_score(ConstraintKind::TimeDistance, cfg), 0.5);
  cfg[ConstraintKind::TimeDistance] = {true, 1.0, 1e6, 2.0};  // T0 is ignored for STOP
  EXPECT_EQ(stop_score(ConstraintKind::TimeDistance, cfg), cfg.bounds.lower);
  // Default piou/pcd STOP distances lie far past T50
  const auto d = ScoreConfig::defaults();
  EXPECT_EQ(stop_score(ConstraintKind::PredictedIOU, d), d.bounds.lower);
  EXPECT_EQ(stop_score(ConstraintKind::PredictedCenterDistance, d), d.bounds.lower);
}

TEST(ScoreConfig, DefaultsAndValidation) {
  const auto d = ScoreConfig::defaults();
  EXPECT_TRUE(d[ConstraintKind::TimeDistance].enabled);
  EXPECT_EQ(d[ConstraintKind::TimeDistance].t50, 1.0);
  EXPECT_EQ(d[ConstraintKind::TimeDistance].tend, 3.0);
  EXPECT_EQ(d[ConstraintKind::PredictedCenterDistance].t50, 0.02);
  EXPECT_EQ(d[ConstraintKind::PredictedCenterDistance].tend, 2.0);
  EXPECT_DOUBLE_EQ(d[ConstraintKind::PredictedIOU].t50, 0.25);
  EXPECT_EQ(d[ConstraintKind::PredictedIOU].tend, 2.0);
  EXPECT_FALSE(d[ConstraintKind::AngleDifference].enabled);
  EXPECT_FALSE(d[ConstraintKind::SpeedNormDifference].enabled);
  for (const auto k : kAllConstraints) EXPECT_FALSE(d[k].t0.has_value());
  EXPECT_EQ(d.bounds.lower, 1e-6);
  EXPECT_NO_THROW(d.validate());

  auto bad = d;
  bad[ConstraintKind::TimeDistance].t0 = 0.5;  // below T50
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = d;
  bad.bounds.lower = 0.6;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(PairDistance, TimeDistance) {
  const Box b{0, 0, 10, 10};
  const auto t = tracklet_with(1, 5, 10, b, {}, b, {});
  const auto s = tracklet_with(2, 12, 20, b, {}, b, {});
  EXPECT_DOUBLE_EQ(pair_distance(ConstraintKind::TimeDistance, t, s, kMeta), 2.0);
  SequenceMeta slow = kMeta;
  slow.fps = 15.0;
  EXPECT_DOUBLE_EQ(pair_distance(ConstraintKind::TimeDistance, t, s, slow), 4.0);
}

TEST(PairDistance, IdenticalDynamics) {
  const Box b{0, 0, 10, 10};
  const auto t = tracklet_with(1, 1, 10, b, {3, 0}, b, {3, 0});
  const auto s = tracklet_with(2, 12, 20, b, {3, 0}, b, {3, 0});
  EXPECT_EQ(pair_distance(ConstraintKind::AngleDifference, t, s, kMeta), 0.0);
  EXPECT_EQ(pair_distance(ConstraintKind::SpeedNormDifference, t, s, kMeta), 0.0);
}

TEST(PairDistance, AngleAndSpeedValues) {
  const Box b{0, 0, 10, 10};
  const auto t = tracklet_with(1, 1, 10, b, {}, b, {3, 0});
  const auto s = tracklet_with(2, 12, 20, b, {0, -4}, b, {});
  EXPECT_NEAR(pair_distance(ConstraintKind::AngleDifference, t, s, kMeta), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(pair_distance(ConstraintKind::SpeedNormDifference, t, s, kMeta), 1.0 / kMeta.diagonal(), 1e-15);
  const auto opposite = tracklet_with(3, 12, 20, b, {-1, 0}, b, {});
  EXPECT_NEAR(pair_distance(ConstraintKind::AngleDifference, t, opposite, kMeta), std::numbers::pi, 1e-15);
  const auto still = tracklet_with(4, 12, 20, b, {0, 0}, b, {});
  EXPECT_EQ(pair_distance(ConstraintKind::AngleDifference, t, still, kMeta), 0.0);
}

TEST(PairDistance, DynamicsSymmetricInVelocities) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> v(-5, 5);
  const Box b{0, 0, 10, 10};
  for (int i = 0; i < 500; ++i) {
    const Vec2 a{v(rng), v(rng)}, c{v(rng), v(rng)};
    const auto t1 = tracklet_with(1, 1, 5, b, {}, b, a);
    const auto s1 = tracklet_with(2, 8, 9, b, c, b, {});
    const auto t2 = tracklet_with(1, 1, 5, b, {}, b, c);
    const auto s2 = tracklet_with(2, 8, 9, b, a, b, {});
    for (const auto k : {ConstraintKind::AngleDifference, ConstraintKind::SpeedNormDifference}) {
      EXPECT_NEAR(pair_distance(k, t1, s1, kMeta), pair_distance(k, t2, s2, kMeta), 1e-12);
    }
  }
}

TEST(PairDistance, ProjectionCoincides) {
  const auto t = tracklet_with(1, 1, 10, {0, 0, 10, 10}, {}, {0, 0, 10, 10}, {5, 0});
  const auto s = tracklet_with(2, 12, 20, {10, 0, 10, 10}, {}, {10, 0, 10, 10}, {});
  EXPECT_DOUBLE_EQ(pair_distance(ConstraintKind::PredictedIOU, t, s, kMeta), 0.0);
  EXPECT_DOUBLE_EQ(pair_distance(ConstraintKind::PredictedCenterDistance, t, s, kMeta), 0.0);
}

TEST(PairDistance, ProjectionOffset) {
  // Projection lands at (10,0); successor sits 5 px further right.
  const auto t = tracklet_with(1, 1, 10, {0, 0, 10, 10}, {}, {0, 0, 10, 10}, {5, 0});
  const auto s = tracklet_with(2, 12, 20, {15, 0, 10, 10}, {}, {15, 0, 10, 10}, {});
  EXPECT_NEAR(pair_distance(ConstraintKind::PredictedIOU, t, s, kMeta), 1.0 - 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(pair_distance(ConstraintKind::PredictedCenterDistance, t, s, kMeta), 5.0 / kMeta.diagonal(), 1e-15);
}

TEST(PairDistance, RequiresTemporalOrder) {
  const Box b{0, 0, 10, 10};
  const auto t = tracklet_with(1, 1, 10, b, {}, b, {});
  const auto s = tracklet_with(2, 10, 20, b, {}, b, {});
  EXPECT_THROW(pair_distance(ConstraintKind::TimeDistance, t, s, kMeta), std::logic_error);
}

TEST(Marginals, SingleStop) {
  const std::vector<PairScores> c{{1, Successor::stop(), {}, 0.002}};
  const auto m = marginals(c);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.at(Successor::stop()), 1.0);
}

TEST(Marginals, EqualProducts) {
  const std::vector<PairScores> c{{1, Successor::of(2), {}, 0.3}, {1, Successor::of(3), {}, 0.3}};
  const auto m = marginals(c);
  EXPECT_EQ(m.at(Successor::of(2)), 0.5);
  EXPECT_EQ(m.at(Successor::of(3)), 0.5);
}

TEST(Marginals, DirectNormalization) {
  const std::vector<PairScores> c{{1, Successor::of(2), {}, 0.4},
                                  {1, Successor::of(3), {}, 0.1},
                                  {1, Successor::stop(), {}, 0.0005}};
  const auto m = marginals(c);
  const double total = 0.4 + 0.1 + 0.0005;
  EXPECT_NEAR(m.at(Successor::of(2)), 0.4 / total, 1e-15);     // 0.79920...
  EXPECT_NEAR(m.at(Successor::of(3)), 0.1 / total, 1e-15);     // 0.19980...
  EXPECT_NEAR(m.at(Successor::stop()), 0.0005 / total, 1e-15); // 0.000999...
  EXPECT_NEAR(m.at(Successor::of(2)) + m.at(Successor::of(3)) + m.at(Successor::stop()), 1.0, 1e-12);
}

TEST(Marginals, ZeroProductsDropped) {
  const std::vector<PairScores> c{{1, Successor::of(2), {}, 0.0}, {1, Successor::stop(), {}, 0.01}};
  const auto m = marginals(c);
  EXPECT_FALSE(m.contains(Successor::of(2)));
  EXPECT_EQ(m.at(Successor::stop()), 1.0);
  const std::vector<PairScores> zeros{{1, Successor::of(2), {}, 0.0}};
  EXPECT_THROW(marginals(zeros), std::logic_error);
}

TEST(Successor, StopSortsLast) {
  EXPECT_TRUE(Successor::of(5) < Successor::stop());
  EXPECT_TRUE(Successor::of(2) < Successor::of(5));
  EXPECT_FALSE(Successor::stop() < Successor::of(1));
}

TEST(ScorePair, ProductOfEnabledScores) {
  const auto cfg = ScoreConfig::defaults();
  const auto t = tracklet_with(1, 1, 10, {0, 0, 10, 10}, {}, {0, 0, 10, 10}, {5, 0});
  const auto s = tracklet_with(2, 12, 20, {10, 0, 10, 10}, {}, {10, 0, 10, 10}, {});
  const auto ps = score_pair(t, s, cfg, kMeta);
  EXPECT_FALSE(ps.scores[index_of(ConstraintKind::AngleDifference)].has_value());
  const double td = *ps.scores[index_of(ConstraintKind::TimeDistance)];
  EXPECT_NEAR(td, 0.0625, 1e-15);  // td = 2 with T50 = 1
  EXPECT_EQ(*ps.scores[index_of(ConstraintKind::PredictedIOU)], cfg.bounds.upper);
  EXPECT_NEAR(ps.product, td * cfg.bounds.upper * cfg.bounds.upper, 1e-18);
  const auto stop = score_stop(t, cfg);
  EXPECT_NEAR(stop.product, std::pow(2.0, -9.0) * 1e-6 * 1e-6, 1e-25);
}
