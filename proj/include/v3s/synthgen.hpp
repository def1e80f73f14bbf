#pragma once

#include <cstdint>
#include <vector>

#include "v3s/frame.hpp"
#include "v3s/geometry.hpp"

namespace v3s {

enum class Shape { Rectangle, Ellipse };

// One hard-edged object translating at constant velocity over a flat
// background. Frame t has the object centered at start + t * velocity.
struct ShapeScene {
  Shape shape = Shape::Rectangle;
  double object_width = 12;
  double object_height = 12;
  Point2 start{32, 32};
  Point2 velocity{0, 0};  // pixels per frame
  int width = 64;
  int height = 64;
  int n_frames = 16;
  int channels = 1;
  float foreground = 0.9f;
  float background = 0.2f;
  std::uint64_t seed = 0;
};

// Throws ObjectOutOfBounds if the object leaves the frame at any t, and
// InvalidArgument for an intensity contrast below 0.5.
void validate(const ShapeScene& scene);

Video render(const ShapeScene& scene);

// Parameters for drawing random scenes. Velocity direction is uniform; its
// magnitude and the object size are drawn from the given ranges.
struct SceneConfig {
  int width = 64;
  int height = 64;
  int n_frames = 80;
  int channels = 1;
  double min_object = 14;
  double max_object = 14;
  double min_speed = 0.5;
  double max_speed = 0.5;
  bool allow_ellipse = false;
  int directions = 0;  // 0: any angle; n: one of n evenly spaced angles
  float foreground = 0.9f;
  float background = 0.2f;
};

// Deterministic in `seed`; the start is placed so the object stays in frame.
ShapeScene random_scene(const SceneConfig& config, std::uint64_t seed);

inline constexpr float kDefaultThreshold = 0.5f;

struct Extent {
  double width = 0;   // bounding box, pixels
  double height = 0;
  Point2 centroid;    // intensity-weighted, pixel centers at k + 0.5
};

// Single 4-connected region of samples above `threshold` (channel mean).
// Throws NoObject / MultipleObjects.
Extent measure_extent(const Frame& frame, float threshold = kDefaultThreshold);

struct Motion {
  std::vector<Point2> steps;  // consecutive centroid differences
  double mean_magnitude = 0;
  double mean_direction_deg = 0;  // atan2 of the mean step, image axes (y down)
};

Motion measure_motion(const Clip& clip, float threshold = kDefaultThreshold);

// Mean step magnitude over steps [first, last).
double mean_step_magnitude(const Motion& motion, std::size_t first, std::size_t last);

}  // namespace v3s
