#pragma once

#include <array>

namespace v3s {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Corners in the fixed order top-left, bottom-left, bottom-right, top-right.
// Every producer and consumer of a Quad uses this order.
struct Quad {
  std::array<Point2, 4> corners{};

  static Quad rectangle(double width, double height) {
    return Quad{{Point2{0, 0}, Point2{0, height}, Point2{width, height}, Point2{width, 0}}};
  }

  friend bool operator==(const Quad&, const Quad&) = default;
};

// Projective map
//   u = (m0 x + m1 y + m2) / (m6 x + m7 y + 1)
//   v = (m3 x + m4 y + m5) / (m6 x + m7 y + 1)
// with the ninth matrix entry fixed at 1.
struct Homography {
  std::array<double, 8> m{1, 0, 0, 0, 1, 0, 0, 0};

  static Homography identity() { return {}; }
  double determinant() const;

  friend bool operator==(const Homography&, const Homography&) = default;
};

inline constexpr double kSingularTolerance = 1e-12;

// Solves the 8x8 correspondence system by Gaussian elimination with partial
// pivoting. Throws SingularSystem on a pivot below kSingularTolerance or when
// the resulting 3x3 matrix is singular.
Homography solve_homography(const Quad& src, const Quad& dst);

// Throws DegenerateDenominator when |m6 x + m7 y + 1| < kSingularTolerance.
Point2 map_point(const Homography& h, Point2 p);

// 3x3 inverse renormalized so the last entry is 1.
Homography invert(const Homography& h);

}  // namespace v3s
