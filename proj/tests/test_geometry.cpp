#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include "v3s/error.hpp"
#include "v3s/geometry.hpp"
#include "v3s/rng.hpp"
#include "v3s/warp.hpp"

using namespace v3s;

namespace {

Quad unit_square() { return Quad::rectangle(1, 1); }

// Independent route to the coefficients: dense least squares on the same
// eight correspondences via Householder QR.
Eigen::Matrix<double, 8, 1> least_squares_coefficients(const Quad& src, const Quad& dst) {
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> rhs;
  for (int i = 0; i < 4; ++i) {
    const double x = src.corners[i].x, y = src.corners[i].y;
    const double u = dst.corners[i].x, v = dst.corners[i].y;
    a.row(2 * i) << x, y, 1, 0, 0, 0, -x * u, -y * u;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -x * v, -y * v;
    rhs(2 * i) = u;
    rhs(2 * i + 1) = v;
  }
  return a.colPivHouseholderQr().solve(rhs);
}

// Corners jittered around a rectangle so no three are collinear.
Quad random_quad(Rng& rng, double w, double h, double jitter) {
  Quad q = Quad::rectangle(w, h);
  for (auto& p : q.corners) {
    p.x += rng.uniform(-jitter, jitter);
    p.y += rng.uniform(-jitter, jitter);
  }
  return q;
}

}  // namespace

TEST(SolveHomography, IdentityForEqualQuads) {
  const Homography h = solve_homography(unit_square(), unit_square());
  const std::array<double, 8> expected{1, 0, 0, 0, 1, 0, 0, 0};
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(h.m[i], expected[i], 1e-12) << "m" << i;
}

TEST(SolveHomography, PureScaleFromScaleCorners) {
  const Quad src = Quad::rectangle(100, 100);
  const Quad dst{{Point2{0, 0}, Point2{0, 30}, Point2{100, 30}, Point2{100, 0}}};
  const Homography h = solve_homography(src, dst);
  EXPECT_NEAR(h.m[0], 1.0, 1e-12);
  EXPECT_NEAR(h.m[4], 0.3, 1e-12);
  for (int i : {1, 2, 3, 5, 6, 7}) EXPECT_NEAR(h.m[i], 0.0, 1e-12) << "m" << i;
}

TEST(SolveHomography, TrapezoidIsPerspectiveAndMatchesLeastSquares) {
  const Quad dst = projection_corners(1, 1, 0.5, Side::Right);
  const Homography h = solve_homography(unit_square(), dst);
  EXPECT_GT(std::abs(h.m[6]), 1e-3);

  const auto ref = least_squares_coefficients(unit_square(), dst);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(h.m[i], ref(i), 1e-9) << "m" << i;
  for (int i = 0; i < 4; ++i) {
    const Point2 p = map_point(h, unit_square().corners[i]);
    EXPECT_NEAR(p.x, dst.corners[i].x, 1e-9);
    EXPECT_NEAR(p.y, dst.corners[i].y, 1e-9);
  }
}

TEST(SolveHomography, RandomQuadsAgreeWithLeastSquares) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Quad src = random_quad(rng, 64, 48, 8);
    const Quad dst = random_quad(rng, 80, 64, 10);
    const Homography h = solve_homography(src, dst);
    const auto ref = least_squares_coefficients(src, dst);
    for (int i = 0; i < 8; ++i)
      EXPECT_NEAR(h.m[i], ref(i), 1e-9 * std::max(1.0, std::abs(ref(i)))) << "trial " << trial;
  }
}

TEST(SolveHomography, CollapsedSourceIsSingular) {
  const Quad src{{Point2{0, 0}, Point2{0, 0}, Point2{1, 1}, Point2{1, 0}}};
  try {
    solve_homography(src, unit_square());
    FAIL() << "expected SingularSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
  }
}

TEST(SolveHomography, CollinearDestinationIsSingular) {
  const Quad dst{{Point2{0, 0}, Point2{1, 1}, Point2{2, 2}, Point2{3, 3}}};
  EXPECT_THROW(solve_homography(unit_square(), dst), Error);
}

TEST(SolveHomography, Deterministic) {
  Rng rng(5);
  const Quad src = random_quad(rng, 64, 64, 6), dst = random_quad(rng, 64, 64, 6);
  EXPECT_EQ(solve_homography(src, dst), solve_homography(src, dst));
}

TEST(SolveHomography, ScaleCaseHasNoPerspectiveTerms) {
  for (auto [a, b] : {std::pair{1.0, 1.15}, {1.3, 1.0}, {1.0, 0.3}, {2.35, 1.0}}) {
    const Homography h = solve_homography(Quad::rectangle(64, 48), scale_corners(64, 48, a, b));
    EXPECT_LE(std::abs(h.m[6]), 1e-9);
    EXPECT_LE(std::abs(h.m[7]), 1e-9);
  }
}

TEST(MapPoint, IdentityAndScale) {
  const Point2 p = map_point(Homography::identity(), {13.5, 2.0});
  EXPECT_EQ(p.x, 13.5);
  EXPECT_EQ(p.y, 2.0);

  Homography scale;
  scale.m = {1, 0, 0, 0, 0.3, 0, 0, 0};
  const Point2 q = map_point(scale, {100, 100});
  EXPECT_DOUBLE_EQ(q.x, 100.0);
  EXPECT_DOUBLE_EQ(q.y, 30.0);
}

TEST(MapPoint, TrapezoidCenterMatchesExtendedPrecision) {
  const Homography h = solve_homography(unit_square(), projection_corners(1, 1, 0.5, Side::Right));
  const Point2 p = map_point(h, {0.5, 0.5});

  const auto& m = h.m;
  const long double x = 0.5L, y = 0.5L;
  const long double w = m[6] * x + m[7] * y + 1.0L;
  const long double u = (m[0] * x + m[1] * y + m[2]) / w;
  const long double v = (m[3] * x + m[4] * y + m[5]) / w;
  EXPECT_NEAR(p.x, static_cast<double>(u), 1e-14);
  EXPECT_NEAR(p.y, static_cast<double>(v), 1e-14);
  // Single-precision evaluation agrees to float resolution.
  const float wf = float(m[6]) * 0.5f + float(m[7]) * 0.5f + 1.0f;
  EXPECT_NEAR(p.x, (float(m[0]) * 0.5f + float(m[1]) * 0.5f + float(m[2])) / wf, 1e-6);
  // Symmetric trapezoid keeps the horizontal midline.
  EXPECT_NEAR(p.y, 0.5, 1e-12);
}

TEST(MapPoint, HorizonThrows) {
  Homography h;
  h.m = {1, 0, 0, 0, 1, 0, -1, 0};  // w = 1 - x
  try {
    map_point(h, {1.0, 3.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateDenominator);
  }
}

TEST(Invert, IdentityAndDiagonal) {
  EXPECT_EQ(invert(Homography::identity()), Homography::identity());
  Homography s;
  s.m = {1.3, 0, 0, 0, 0.5, 0, 0, 0};
  const Homography inv = invert(s);
  EXPECT_NEAR(inv.m[0], 1 / 1.3, 1e-15);
  EXPECT_NEAR(inv.m[4], 2.0, 1e-15);
  for (int i : {1, 2, 3, 5, 6, 7}) EXPECT_EQ(inv.m[i], 0.0);
}

TEST(Invert, RoundTripOnGrid) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Homography h = solve_homography(Quad::rectangle(64, 64), random_quad(rng, 64, 64, 12));
    const Homography inv = invert(h);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const Point2 p{64.0 * j / 9, 64.0 * i / 9};
        const Point2 back = map_point(inv, map_point(h, p));
        EXPECT_NEAR(back.x, p.x, 1e-6);
        EXPECT_NEAR(back.y, p.y, 1e-6);
      }
  }
}

TEST(Invert, SingularThrows) {
  Homography h;
  h.m = {1, 2, 0, 2, 4, 0, 0, 0};
  EXPECT_THROW(invert(h), Error);
}
