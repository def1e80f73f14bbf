#include "v3s/warp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "v3s/error.hpp"
#include "v3s/rng.hpp"

namespace v3s {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    fail(ErrorKind::InvalidArgument, "not a number: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Bilinear read at continuous pixel coordinates (pixel centers at k + 0.5),
// with indices clamped to the frame.
inline float sample_bilinear(const Frame& f, double x, double y, int ch) {
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double tx = fx - x0f;
  const double ty = fy - y0f;
  const int x0 = static_cast<int>(x0f);
  const int y0 = static_cast<int>(y0f);
  const int xa = std::clamp(x0, 0, f.width - 1);
  const int xb = std::clamp(x0 + 1, 0, f.width - 1);
  const int ya = std::clamp(y0, 0, f.height - 1);
  const int yb = std::clamp(y0 + 1, 0, f.height - 1);
  const double top = (1.0 - tx) * f.at(ya, xa, ch) + tx * f.at(ya, xb, ch);
  const double bottom = (1.0 - tx) * f.at(yb, xa, ch) + tx * f.at(yb, xb, ch);
  return static_cast<float>((1.0 - ty) * top + ty * bottom);
}

inline float clamp01(float v) { return std::clamp(v, 0.0f, 1.0f); }

Point2 rotate_point(Point2 p, Side side, double width, double height) {
  // Right is the reference orientation; W/H are the dims of the target frame.
  switch (side) {
    case Side::Right: return p;
    case Side::Top: return {p.y, height - p.x};  // reference frame is H x W
    case Side::Left: return {width - p.x, height - p.y};
    case Side::Bottom: return {width - p.y, p.x};  // reference frame is H x W
  }
  return p;
}

}  // namespace

std::string_view to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
  }
  return "right";
}

Side parse_side(std::string_view text) {
  if (text == "left") return Side::Left;
  if (text == "right") return Side::Right;
  if (text == "top") return Side::Top;
  if (text == "bottom") return Side::Bottom;
  fail(ErrorKind::InvalidArgument, "unknown side '" + std::string(text) + "'");
}

SpatialSpec SpatialSpec::scale(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    fail(ErrorKind::InvalidFactor, "scale factors must be positive");
  if ((a == 1.0) == (b == 1.0))
    fail(ErrorKind::InvalidFactor, "scale spec needs exactly one factor equal to 1");
  SpatialSpec s;
  s.kind = Kind::Scale;
  s.a = a;
  s.b = b;
  return s;
}

SpatialSpec SpatialSpec::projection(double c, Side side) {
  if (!(c > 0.0 && c < 1.0)) fail(ErrorKind::InvalidFactor, "projection factor must lie in (0,1)");
  SpatialSpec s;
  s.kind = Kind::Projection;
  s.c = c;
  s.side = side;
  return s;
}

std::string to_string(const SpatialSpec& spec) {
  switch (spec.kind) {
    case SpatialSpec::Kind::Identity: return "identity";
    case SpatialSpec::Kind::Scale: return "scale:" + format_number(spec.a) + ":" + format_number(spec.b);
    case SpatialSpec::Kind::Projection:
      return "projection:" + format_number(spec.c) + ":" + std::string(to_string(spec.side));
  }
  return "identity";
}

SpatialSpec parse_spatial_spec(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts[0] == "identity" && parts.size() == 1) return SpatialSpec::identity();
  if (parts[0] == "scale" && parts.size() == 3)
    return SpatialSpec::scale(parse_number(parts[1]), parse_number(parts[2]));
  if (parts[0] == "projection" && parts.size() == 3)
    return SpatialSpec::projection(parse_number(parts[1]), parse_side(parts[2]));
  fail(ErrorKind::InvalidArgument, "bad spatial spec '" + std::string(text) + "'");
}

Quad scale_corners(double width, double height, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorKind::InvalidFactor, "scale factors must be positive");
  return Quad::rectangle(a * width, b * height);
}

Quad projection_corners(double width, double height, double c, Side side) {
  if (!(c > 0.0 && c < 1.0)) fail(ErrorKind::InvalidFactor, "projection factor must lie in (0,1)");
  // Right-side trapezoid in the reference frame, then rotated into place.
  const bool swap = side == Side::Top || side == Side::Bottom;
  const double rw = swap ? height : width;
  const double rh = swap ? width : height;
  const std::array<Point2, 4> right{Point2{0, 0}, Point2{0, rh}, Point2{rw, (rh + c * rh) / 2},
                                    Point2{rw, (rh - c * rh) / 2}};
  std::array<Point2, 4> rotated{};
  for (int i = 0; i < 4; ++i) rotated[i] = rotate_point(right[i], side, width, height);

  // Re-establish TL, BL, BR, TR order by position.
  Quad q;
  const double cx = width / 2, cy = height / 2;
  for (const Point2& p : rotated) {
    const bool left = p.x < cx;
    const bool top = p.y < cy;
    const int slot = top ? (left ? 0 : 3) : (left ? 1 : 2);
    q.corners[slot] = p;
  }
  return q;
}

Quad spec_corners(const SpatialSpec& spec, double width, double height) {
  switch (spec.kind) {
    case SpatialSpec::Kind::Identity: return Quad::rectangle(width, height);
    case SpatialSpec::Kind::Scale: return scale_corners(width, height, spec.a, spec.b);
    case SpatialSpec::Kind::Projection: return projection_corners(width, height, spec.c, spec.side);
  }
  return Quad::rectangle(width, height);
}

Homography spec_homography(const SpatialSpec& spec, int width, int height) {
  if (spec.kind == SpatialSpec::Kind::Identity) return Homography::identity();
  return solve_homography(Quad::rectangle(width, height), spec_corners(spec, width, height));
}

Size canvas_size(const SpatialSpec& spec, int width, int height) {
  const Quad q = spec_corners(spec, width, height);
  double max_x = 0, max_y = 0;
  for (const auto& p : q.corners) {
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  // 1e-9 slack so 1.15 * 64 style products that land a hair above an integer
  // do not grow the canvas by a column.
  return {static_cast<int>(std::ceil(max_x - 1e-9)), static_cast<int>(std::ceil(max_y - 1e-9))};
}

Frame warp_frame(const Frame& frame, const Homography& h, int out_width, int out_height) {
  const Homography inv = invert(h);
  const auto& m = inv.m;
  Frame out(out_height, out_width, frame.channels, 0.0f);
  const double w = frame.width, hgt = frame.height;
  for (int i = 0; i < out_height; ++i) {
    const double v = i + 0.5;
    for (int j = 0; j < out_width; ++j) {
      const double u = j + 0.5;
      const double den = m[6] * u + m[7] * v + 1.0;
      if (std::abs(den) < kSingularTolerance) continue;
      const double sx = (m[0] * u + m[1] * v + m[2]) / den;
      const double sy = (m[3] * u + m[4] * v + m[5]) / den;
      if (!(sx >= 0.0 && sx <= w && sy >= 0.0 && sy <= hgt)) continue;
      for (int ch = 0; ch < frame.channels; ++ch)
        out.at(i, j, ch) = clamp01(sample_bilinear(frame, sx, sy, ch));
    }
  }
  return out;
}

Clip apply_spatial(const Clip& clip, const SpatialSpec& spec, int out_width, int out_height) {
  Clip out;
  if (clip.empty()) return out;
  const Frame& first = clip.frames.front();
  for (const auto& f : clip.frames)
    if (!f.same_shape(first)) fail(ErrorKind::InvalidArgument, "clip frames differ in shape");

  out.frames.reserve(clip.length());
  if (spec.kind == SpatialSpec::Kind::Identity) {
    for (const auto& f : clip.frames)
      out.frames.push_back(out_width == f.width && out_height == f.height
                               ? f
                               : resample(f, {0, 0, double(f.width), double(f.height)}, out_width,
                                          out_height));
    return out;
  }
  const Homography h = spec_homography(spec, first.width, first.height);
  for (const auto& f : clip.frames) out.frames.push_back(warp_frame(f, h, out_width, out_height));
  return out;
}

Frame resample(const Frame& frame, RegionF region, int out_width, int out_height) {
  Frame out(out_height, out_width, frame.channels);
  const double sx = region.width / out_width;
  const double sy = region.height / out_height;
  for (int i = 0; i < out_height; ++i) {
    const double y = region.y + (i + 0.5) * sy;
    for (int j = 0; j < out_width; ++j) {
      const double x = region.x + (j + 0.5) * sx;
      for (int ch = 0; ch < frame.channels; ++ch)
        out.at(i, j, ch) = clamp01(sample_bilinear(frame, x, y, ch));
    }
  }
  return out;
}

Size resized_size(int width, int height, int target) {
  if (target <= 0) fail(ErrorKind::InvalidArgument, "resize target must be positive");
  const double s = double(target) / std::min(width, height);
  if (width <= height) return {target, static_cast<int>(std::lround(height * s))};
  return {static_cast<int>(std::lround(width * s)), target};
}

Frame resize_short_side(const Frame& frame, int target) {
  const Size sz = resized_size(frame.width, frame.height, target);
  if (sz.width == frame.width && sz.height == frame.height) return frame;
  return resample(frame, {0, 0, double(frame.width), double(frame.height)}, sz.width, sz.height);
}

CropRect random_crop(Rng& rng, Size bounds, int crop_width, int crop_height) {
  if (crop_width <= 0 || crop_height <= 0 || crop_width > bounds.width || crop_height > bounds.height)
    fail(ErrorKind::InvalidCrop, "crop " + std::to_string(crop_width) + "x" + std::to_string(crop_height) +
                                     " does not fit " + std::to_string(bounds.width) + "x" +
                                     std::to_string(bounds.height));
  const int x = static_cast<int>(rng.uniform_int(0, bounds.width - crop_width));
  const int y = static_cast<int>(rng.uniform_int(0, bounds.height - crop_height));
  return {x, y, crop_width, crop_height};
}

CropRect center_crop(Size bounds, int crop_width, int crop_height) {
  if (crop_width <= 0 || crop_height <= 0 || crop_width > bounds.width || crop_height > bounds.height)
    fail(ErrorKind::InvalidCrop, "crop does not fit");
  return {(bounds.width - crop_width) / 2, (bounds.height - crop_height) / 2, crop_width, crop_height};
}

std::optional<HeadEnd> head_end_of(const SpatialSpec& spec, int width, int height) {
  if (spec.kind != SpatialSpec::Kind::Projection) return std::nullopt;
  const bool vertical_edge = spec.side == Side::Left || spec.side == Side::Right;
  return HeadEnd{spec.side, spec.c * (vertical_edge ? height : width)};
}

Frame preprocess(const Frame& frame, int resize_to, CropRect crop, std::optional<HeadEnd> head) {
  if (crop.width <= 0 || crop.height <= 0) fail(ErrorKind::InvalidCrop, "empty crop");

  if (head && head->length < resize_to) {
    const double l = head->length;
    const double w = frame.width, h = frame.height;
    RegionF r{0, 0, l, l};
    switch (head->side) {
      case Side::Right: r.x = w - l; r.y = (h - l) / 2; break;
      case Side::Left: r.x = 0; r.y = (h - l) / 2; break;
      case Side::Top: r.x = (w - l) / 2; r.y = 0; break;
      case Side::Bottom: r.x = (w - l) / 2; r.y = h - l; break;
    }
    if (r.x < 0 || r.y < 0 || r.x + l > w + 1e-9 || r.y + l > h + 1e-9)
      fail(ErrorKind::InvalidCrop, "head-end square does not fit the frame");
    return resample(frame, r, crop.width, crop.height);
  }

  const Frame resized = resize_short_side(frame, resize_to);
  if (crop.x < 0 || crop.y < 0 || crop.x + crop.width > resized.width ||
      crop.y + crop.height > resized.height)
    fail(ErrorKind::InvalidCrop, "crop (" + std::to_string(crop.x) + "," + std::to_string(crop.y) + ") " +
                                     std::to_string(crop.width) + "x" + std::to_string(crop.height) +
                                     " exceeds " + std::to_string(resized.width) + "x" +
                                     std::to_string(resized.height));
  Frame out(crop.height, crop.width, frame.channels);
  for (int i = 0; i < crop.height; ++i)
    for (int j = 0; j < crop.width; ++j)
      for (int ch = 0; ch < frame.channels; ++ch)
        out.at(i, j, ch) = resized.at(crop.y + i, crop.x + j, ch);
  return out;
}

}  // namespace v3s
