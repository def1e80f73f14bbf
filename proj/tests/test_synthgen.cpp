#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "v3s/error.hpp"
#include "v3s/synthgen.hpp"
#include "v3s/temporal.hpp"
#include "v3s/warp.hpp"

using namespace v3s;

namespace {

ShapeScene centered(double w, double h, Point2 velocity = {0, 0}, int frames = 16) {
  ShapeScene s;
  s.object_width = w;
  s.object_height = h;
  s.start = {32, 32};
  s.velocity = velocity;
  s.n_frames = frames;
  return s;
}

ErrorKind kind_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Render, StaticSceneHasIdenticalFrames) {
  const Video v = render(centered(10, 20));
  ASSERT_EQ(v.length(), 16u);
  for (const Frame& f : v.frames) EXPECT_EQ(f, v.frames[0]);
}

TEST(Render, CentroidAdvancesOnePixelPerFrame) {
  const ShapeScene s = [] {
    ShapeScene x = centered(10, 20, {1, 0});
    x.start = {20, 32};
    return x;
  }();
  const Video v = render(s);
  for (std::size_t t = 0; t < v.length(); ++t) {
    const Extent e = measure_extent(v.frames[t]);
    EXPECT_NEAR(e.centroid.x, 20.0 + t, 1e-9) << t;
    EXPECT_NEAR(e.centroid.y, 32.0, 1e-9);
  }
}

TEST(Render, Deterministic) {
  SceneConfig cfg;
  const ShapeScene a = random_scene(cfg, 42), b = random_scene(cfg, 42);
  EXPECT_EQ(render(a), render(b));
  EXPECT_NE(render(a), render(random_scene(cfg, 43)));
}

TEST(Render, BackgroundAndForegroundLevels) {
  const Video v = render(centered(10, 10));
  EXPECT_FLOAT_EQ(v.frames[0].at(0, 0), 0.2f);
  EXPECT_FLOAT_EQ(v.frames[0].at(32, 32), 0.9f);
}

TEST(Render, RejectsInvalidScenes) {
  ShapeScene s = centered(10, 10, {2, 0}, 30);
  EXPECT_EQ(kind_of([&] { render(s); }), ErrorKind::ObjectOutOfBounds);
  ShapeScene low = centered(10, 10);
  low.foreground = 0.5f;
  low.background = 0.2f;
  EXPECT_EQ(kind_of([&] { render(low); }), ErrorKind::InvalidArgument);
}

TEST(MeasureExtent, RecoversRectangleSize) {
  const Extent e = measure_extent(render(centered(10, 20)).frames[0]);
  EXPECT_NEAR(e.width, 10, 1);
  EXPECT_NEAR(e.height, 20, 1);
  EXPECT_NEAR(e.centroid.x, 32, 1e-9);
  EXPECT_NEAR(e.centroid.y, 32, 1e-9);
}

TEST(MeasureExtent, EllipseFitsItsBox) {
  ShapeScene s = centered(20, 12);
  s.shape = Shape::Ellipse;
  const Extent e = measure_extent(render(s).frames[0]);
  EXPECT_NEAR(e.width, 20, 1);
  EXPECT_NEAR(e.height, 12, 1);
}

TEST(MeasureExtent, HalfHeightScale) {
  const Frame f = render(centered(10, 20)).frames[0];
  const auto spec = SpatialSpec::scale(1, 0.5);
  const Size canvas = canvas_size(spec, 64, 64);
  const Frame out = warp_frame(f, spec_homography(spec, 64, 64), canvas.width, canvas.height);
  EXPECT_NEAR(measure_extent(out).height, 10, 1);
}

TEST(MeasureExtent, BlankAndSplitFrames) {
  Frame blank(16, 16, 1, 0.1f);
  EXPECT_EQ(kind_of([&] { measure_extent(blank); }), ErrorKind::NoObject);
  Frame two(16, 16, 1, 0.0f);
  two.at(2, 2) = 1.0f;
  two.at(10, 10) = 1.0f;
  EXPECT_EQ(kind_of([&] { measure_extent(two); }), ErrorKind::MultipleObjects);
  Frame diagonal(16, 16, 1, 0.0f);
  diagonal.at(4, 4) = 1.0f;
  diagonal.at(5, 5) = 1.0f;  // 4-connectivity: not touching
  EXPECT_EQ(kind_of([&] { measure_extent(diagonal); }), ErrorKind::MultipleObjects);
}

TEST(MeasureMotion, StaticSceneHasZeroSteps) {
  const Motion m = measure_motion(render(centered(8, 8)));
  ASSERT_EQ(m.steps.size(), 15u);
  for (const Point2& p : m.steps) {
    EXPECT_EQ(p.x, 0);
    EXPECT_EQ(p.y, 0);
  }
  EXPECT_EQ(m.mean_magnitude, 0);
}

TEST(MeasureMotion, TemporalScaleThree) {
  ShapeScene s = centered(8, 8, {1, 0}, 48);
  s.start = {6, 32};
  const Video v = render(s);
  const Motion m = measure_motion(select_frames(v, scale_indices(v.length(), 3, 0, 16)));
  EXPECT_NEAR(m.mean_magnitude, 3, 0.15);
  EXPECT_NEAR(m.mean_direction_deg, 0, 1e-9);
}

TEST(MeasureMotion, AnisotropicScaleRotatesDirection) {
  const auto spec = SpatialSpec::scale(1, 2);
  const Size canvas = canvas_size(spec, 64, 64);
  auto warped_motion = [&](Point2 velocity) {
    ShapeScene s = centered(6, 6, velocity, 12);
    s.start = {20, 14};
    return measure_motion(apply_spatial(render(s), spec, canvas.width, canvas.height));
  };
  EXPECT_NEAR(warped_motion({1, 0}).mean_direction_deg, 0.0, 1e-6);
  const Motion diag = warped_motion({1, 1});
  EXPECT_NEAR(diag.mean_direction_deg, std::atan2(2.0, 1.0) * 180 / std::numbers::pi, 3.0);
  EXPECT_NEAR(diag.mean_magnitude, std::sqrt(5.0), 0.05 * std::sqrt(5.0));
}

TEST(OracleClosure, RandomScenesRecoverExtent) {
  SceneConfig cfg;
  cfg.min_object = 8;
  cfg.max_object = 20;
  cfg.n_frames = 40;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const ShapeScene s = random_scene(cfg, seed);
    const Video v = render(s);
    for (std::size_t t : {std::size_t{0}, v.length() - 1}) {
      const Extent e = measure_extent(v.frames[t]);
      EXPECT_NEAR(e.width, s.object_width, 1.0) << seed;
      EXPECT_NEAR(e.height, s.object_height, 1.0) << seed;
    }
  }
}

TEST(OracleClosure, PixelVelocitiesRecoverMotion) {
  for (Point2 vel : {Point2{1, 0}, Point2{0, -1}, Point2{1, 1}, Point2{-1, 2}, Point2{2, -1}}) {
    ShapeScene s = centered(9, 7, vel, 12);
    const Motion m = measure_motion(render(s));
    const double speed = std::hypot(vel.x, vel.y);
    EXPECT_NEAR(m.mean_magnitude, speed, 0.02 * speed);
    EXPECT_NEAR(m.mean_direction_deg, std::atan2(vel.y, vel.x) * 180 / std::numbers::pi, 0.5);
  }
}

TEST(RandomScene, DirectionsAreQuantised) {
  SceneConfig cfg;
  cfg.directions = 4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ShapeScene s = random_scene(cfg, seed);
    EXPECT_TRUE(std::abs(s.velocity.x) < 1e-12 || std::abs(s.velocity.y) < 1e-12) << seed;
  }
}

TEST(RandomScene, ImpossibleConfigThrows) {
  SceneConfig cfg;
  cfg.min_object = cfg.max_object = 40;
  cfg.min_speed = cfg.max_speed = 2;
  EXPECT_EQ(kind_of([&] { random_scene(cfg, 1); }), ErrorKind::ObjectOutOfBounds);
}
