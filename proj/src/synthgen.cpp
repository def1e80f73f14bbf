#include "v3s/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "v3s/error.hpp"
#include "v3s/rng.hpp"

namespace v3s {

namespace {

bool inside(const ShapeScene& s, double px, double py, Point2 center) {
  const double dx = px - center.x;
  const double dy = py - center.y;
  if (s.shape == Shape::Rectangle) {
    // Half-open so an integer-width object covers exactly that many pixels.
    return dx >= -s.object_width / 2 && dx < s.object_width / 2 && dy >= -s.object_height / 2 &&
           dy < s.object_height / 2;
  }
  const double nx = dx / (s.object_width / 2);
  const double ny = dy / (s.object_height / 2);
  return nx * nx + ny * ny < 1.0;
}

Point2 center_at(const ShapeScene& s, int t) {
  return {s.start.x + t * s.velocity.x, s.start.y + t * s.velocity.y};
}

}  // namespace

void validate(const ShapeScene& s) {
  if (s.width <= 0 || s.height <= 0 || s.n_frames <= 0 || (s.channels != 1 && s.channels != 3))
    fail(ErrorKind::InvalidArgument, "bad scene dimensions");
  if (!(s.object_width > 0 && s.object_height > 0))
    fail(ErrorKind::InvalidArgument, "object size must be positive");
  if (std::abs(s.foreground - s.background) < 0.5f)
    fail(ErrorKind::InvalidArgument, "foreground/background contrast below 0.5");
  if (s.foreground < 0 || s.foreground > 1 || s.background < 0 || s.background > 1)
    fail(ErrorKind::OutOfRangeSample, "scene intensities outside [0,1]");
  // Linear motion: the extremes are the first and last frames.
  for (int t : {0, s.n_frames - 1}) {
    const Point2 c = center_at(s, t);
    if (c.x - s.object_width / 2 < 0 || c.x + s.object_width / 2 > s.width ||
        c.y - s.object_height / 2 < 0 || c.y + s.object_height / 2 > s.height)
      fail(ErrorKind::ObjectOutOfBounds, "object leaves the frame at t=" + std::to_string(t));
  }
}

Video render(const ShapeScene& s) {
  validate(s);
  Video video;
  video.frames.reserve(s.n_frames);
  for (int t = 0; t < s.n_frames; ++t) {
    Frame f(s.height, s.width, s.channels, s.background);
    const Point2 c = center_at(s, t);
    for (int i = 0; i < s.height; ++i)
      for (int j = 0; j < s.width; ++j)
        if (inside(s, j + 0.5, i + 0.5, c))
          for (int ch = 0; ch < s.channels; ++ch) f.at(i, j, ch) = s.foreground;
    video.frames.push_back(std::move(f));
  }
  return video;
}

ShapeScene random_scene(const SceneConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  ShapeScene s;
  s.seed = seed;
  s.width = cfg.width;
  s.height = cfg.height;
  s.n_frames = cfg.n_frames;
  s.channels = cfg.channels;
  s.foreground = cfg.foreground;
  s.background = cfg.background;
  s.shape = cfg.allow_ellipse && rng.uniform01() < 0.5 ? Shape::Ellipse : Shape::Rectangle;
  s.object_width = rng.uniform(cfg.min_object, cfg.max_object);
  s.object_height = rng.uniform(cfg.min_object, cfg.max_object);
  const double speed = rng.uniform(cfg.min_speed, cfg.max_speed);
  const double angle =
      cfg.directions > 0
          ? 2.0 * std::numbers::pi * static_cast<double>(rng.uniform_int(0, cfg.directions - 1)) / cfg.directions
          : rng.uniform(0.0, 2.0 * std::numbers::pi);
  s.velocity = {speed * std::cos(angle), speed * std::sin(angle)};

  const double travel_x = s.velocity.x * (cfg.n_frames - 1);
  const double travel_y = s.velocity.y * (cfg.n_frames - 1);
  const double lo_x = s.object_width / 2 + std::max(0.0, -travel_x);
  const double hi_x = cfg.width - s.object_width / 2 - std::max(0.0, travel_x);
  const double lo_y = s.object_height / 2 + std::max(0.0, -travel_y);
  const double hi_y = cfg.height - s.object_height / 2 - std::max(0.0, travel_y);
  if (lo_x > hi_x || lo_y > hi_y)
    fail(ErrorKind::ObjectOutOfBounds, "scene config cannot keep the object in frame");
  s.start = {rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
  return s;
}

Extent measure_extent(const Frame& frame, float threshold) {
  const int h = frame.height, w = frame.width;
  std::vector<unsigned char> mask(static_cast<std::size_t>(h) * w, 0);
  std::vector<float> value(mask.size(), 0.0f);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      float sum = 0;
      for (int ch = 0; ch < frame.channels; ++ch) sum += frame.at(i, j, ch);
      const float mean = sum / frame.channels;
      value[i * w + j] = mean;
      mask[i * w + j] = mean > threshold;
    }

  // Label the first region found, then check nothing else is lit.
  std::vector<int> stack;
  int seeds = 0;
  Extent e;
  double wsum = 0, cx = 0, cy = 0;
  int min_r = h, max_r = -1, min_c = w, max_c = -1;
  for (int start = 0; start < h * w; ++start) {
    if (mask[start] != 1) continue;
    if (++seeds > 1) fail(ErrorKind::MultipleObjects, "more than one foreground region");
    stack.push_back(start);
    mask[start] = 2;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int r = p / w, c = p % w;
      min_r = std::min(min_r, r);
      max_r = std::max(max_r, r);
      min_c = std::min(min_c, c);
      max_c = std::max(max_c, c);
      wsum += value[p];
      cx += value[p] * (c + 0.5);
      cy += value[p] * (r + 0.5);
      const int nbr[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[0] >= h || n[1] < 0 || n[1] >= w) continue;
        const int q = n[0] * w + n[1];
        if (mask[q] == 1) {
          mask[q] = 2;
          stack.push_back(q);
        }
      }
    }
  }
  if (seeds == 0) fail(ErrorKind::NoObject, "no sample above threshold");
  e.width = max_c - min_c + 1;
  e.height = max_r - min_r + 1;
  e.centroid = {cx / wsum, cy / wsum};
  return e;
}

Motion measure_motion(const Clip& clip, float threshold) {
  Motion m;
  if (clip.empty()) return m;
  Point2 prev = measure_extent(clip.frames.front(), threshold).centroid;
  double sx = 0, sy = 0, mag = 0;
  for (std::size_t t = 1; t < clip.length(); ++t) {
    const Point2 cur = measure_extent(clip.frames[t], threshold).centroid;
    const Point2 d{cur.x - prev.x, cur.y - prev.y};
    m.steps.push_back(d);
    sx += d.x;
    sy += d.y;
    mag += std::hypot(d.x, d.y);
    prev = cur;
  }
  if (!m.steps.empty()) {
    const double n = static_cast<double>(m.steps.size());
    m.mean_magnitude = mag / n;
    m.mean_direction_deg = std::atan2(sy / n, sx / n) * 180.0 / std::numbers::pi;
  }
  return m;
}

double mean_step_magnitude(const Motion& motion, std::size_t first, std::size_t last) {
  if (first >= last || last > motion.steps.size())
    fail(ErrorKind::InvalidArgument, "bad step range");
  double sum = 0;
  for (std::size_t i = first; i < last; ++i) sum += std::hypot(motion.steps[i].x, motion.steps[i].y);
  return sum / static_cast<double>(last - first);
}

}  // namespace v3s
