#include "v3s/geometry.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "v3s/error.hpp"

namespace v3s {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 to_matrix(const Homography& h) {
  const auto& m = h.m;
  return {{{m[0], m[1], m[2]}, {m[3], m[4], m[5]}, {m[6], m[7], 1.0}}};
}

double det3(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

bool all_finite(const Homography& h) {
  for (double v : h.m)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

double Homography::determinant() const { return det3(to_matrix(*this)); }

Homography solve_homography(const Quad& src, const Quad& dst) {
  // Rows 0..3 constrain u, rows 4..7 constrain v.
  std::array<std::array<double, 9>, 8> a{};
  for (int i = 0; i < 4; ++i) {
    const auto [x, y] = src.corners[i];
    const auto [u, v] = dst.corners[i];
    a[i] = {x, y, 1, 0, 0, 0, -x * u, -y * u, u};
    a[i + 4] = {0, 0, 0, x, y, 1, -x * v, -y * v, v};
  }

  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 8; ++row)
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    if (std::abs(a[pivot][col]) < kSingularTolerance)
      fail(ErrorKind::SingularSystem,
           "degenerate correspondence (pivot " + std::to_string(a[pivot][col]) + " in column " +
               std::to_string(col) + ")");
    std::swap(a[col], a[pivot]);
    for (int row = col + 1; row < 8; ++row) {
      const double f = a[row][col] / a[col][col];
      if (f == 0.0) continue;
      for (int k = col; k < 9; ++k) a[row][k] -= f * a[col][k];
    }
  }

  Homography h;
  for (int row = 7; row >= 0; --row) {
    double acc = a[row][8];
    for (int k = row + 1; k < 8; ++k) acc -= a[row][k] * h.m[k];
    h.m[row] = acc / a[row][row];
  }

  if (!all_finite(h) || std::abs(h.determinant()) < kSingularTolerance)
    fail(ErrorKind::SingularSystem, "solved homography is singular");
  return h;
}

Point2 map_point(const Homography& h, Point2 p) {
  const auto& m = h.m;
  const double w = m[6] * p.x + m[7] * p.y + 1.0;
  if (std::abs(w) < kSingularTolerance)
    fail(ErrorKind::DegenerateDenominator, "point lies on the projective horizon");
  return {(m[0] * p.x + m[1] * p.y + m[2]) / w, (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

Homography invert(const Homography& h) {
  const Mat3 a = to_matrix(h);
  const double det = det3(a);
  if (!std::isfinite(det) || std::abs(det) < kSingularTolerance)
    fail(ErrorKind::SingularSystem, "homography determinant " + std::to_string(det));

  // adjugate / det, only the ratio to the (2,2) entry matters
  Mat3 adj{};
  adj[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  adj[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
  adj[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
  adj[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  adj[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  adj[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
  adj[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  adj[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
  adj[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];

  const double scale = adj[2][2] / det;
  if (std::abs(scale) < kSingularTolerance)
    fail(ErrorKind::SingularSystem, "inverse cannot be normalized (maps the origin to infinity)");

  Homography inv;
  inv.m = {adj[0][0] / adj[2][2], adj[0][1] / adj[2][2], adj[0][2] / adj[2][2],
           adj[1][0] / adj[2][2], adj[1][1] / adj[2][2], adj[1][2] / adj[2][2],
           adj[2][0] / adj[2][2], adj[2][1] / adj[2][2]};
  return inv;
}

}  // namespace v3s
