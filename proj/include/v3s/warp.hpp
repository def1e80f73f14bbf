#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "v3s/frame.hpp"
#include "v3s/geometry.hpp"

namespace v3s {

class Rng;

enum class Side { Left, Right, Top, Bottom };

std::string_view to_string(Side side);
Side parse_side(std::string_view text);

struct SpatialSpec {
  enum class Kind { Identity, Scale, Projection };

  Kind kind = Kind::Identity;
  double a = 1.0;  // width factor (Scale)
  double b = 1.0;  // height factor (Scale)
  double c = 1.0;  // head-end length factor (Projection)
  Side side = Side::Right;

  static SpatialSpec identity() { return {}; }
  // Exactly one of a, b must equal 1; both positive.
  static SpatialSpec scale(double a, double b);
  // 0 < c < 1.
  static SpatialSpec projection(double c, Side side);

  friend bool operator==(const SpatialSpec&, const SpatialSpec&) = default;
};

// "identity", "scale:<a>:<b>", "projection:<c>:<side>".
std::string to_string(const SpatialSpec& spec);
SpatialSpec parse_spatial_spec(std::string_view text);

// (0,0), (0,bH), (aW,bH), (aW,0). Throws InvalidFactor for a<=0 or b<=0.
Quad scale_corners(double width, double height, double a, double b);

// Trapezoid whose head-end edge is centered and c times the full edge. The
// Right case is (0,0), (0,H), (W,(H+cH)/2), (W,(H-cH)/2); the other sides are
// its 90 degree rotations. Throws InvalidFactor unless 0 < c < 1.
Quad projection_corners(double width, double height, double c, Side side);

// Destination quad of `spec` for a width x height source frame.
Quad spec_corners(const SpatialSpec& spec, double width, double height);

// Homography taking the full source rectangle to spec_corners.
Homography spec_homography(const SpatialSpec& spec, int width, int height);

struct Size {
  int width = 0;
  int height = 0;
  friend bool operator==(const Size&, const Size&) = default;
};

// Bounding box of the destination quad, rounded up.
Size canvas_size(const SpatialSpec& spec, int width, int height);

// Inverse-mapped bilinear warp. Output pixel centers are pulled back through
// invert(h); source positions outside the frame rectangle read as 0.
Frame warp_frame(const Frame& frame, const Homography& h, int out_width, int out_height);

// Same homography for every frame. Identity resizes to the output dims.
Clip apply_spatial(const Clip& clip, const SpatialSpec& spec, int out_width, int out_height);

// Axis-aligned source region in continuous pixel coordinates.
struct RegionF {
  double x = 0, y = 0, width = 0, height = 0;
};

// Bilinear resample of `region` onto an out_width x out_height grid, edge
// samples clamped.
Frame resample(const Frame& frame, RegionF region, int out_width, int out_height);

// Aspect-preserving resize so the shorter side equals `target`.
Size resized_size(int width, int height, int target);
Frame resize_short_side(const Frame& frame, int target);

struct CropRect {
  int x = 0, y = 0, width = 0, height = 0;
  friend bool operator==(const CropRect&, const CropRect&) = default;
};

CropRect random_crop(Rng& rng, Size bounds, int crop_width, int crop_height);
CropRect center_crop(Size bounds, int crop_width, int crop_height);

struct HeadEnd {
  Side side = Side::Right;
  double length = 0.0;  // pixels, on the warped canvas
};

// Head end of a Projection spec on its canvas; nullopt for other kinds.
std::optional<HeadEnd> head_end_of(const SpatialSpec& spec, int width, int height);

// Resize (short side -> resize_to) then crop. When a head end shorter than
// resize_to is given, an l x l square flush against (and centered on) the head
// end is cut instead and resized to crop.width x crop.height; crop.x/y are
// ignored on that path. Throws InvalidCrop when the crop leaves the frame.
Frame preprocess(const Frame& frame, int resize_to, CropRect crop,
                 std::optional<HeadEnd> head = std::nullopt);

}  // namespace v3s
