#pragma once

// Orientation test in R^3 with a floating point filter and an exact rational
// fallback.  Doubles convert exactly to rationals, so the fallback sign is
// the true sign of the determinant of the given inputs.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>

namespace idealhyp {

using Point3 = std::array<double, 3>;

namespace detail {

inline int orient3d_exact(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  using Q = boost::multiprecision::cpp_rational;
  Q m[3][3];
  for (int k = 0; k < 3; ++k) {
    m[0][k] = Q(b[k]) - Q(a[k]);
    m[1][k] = Q(c[k]) - Q(a[k]);
    m[2][k] = Q(d[k]) - Q(a[k]);
  }
  const Q det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

}  // namespace detail

/// Determinant of (b - a, c - a, d - a) in floating point.
inline double orient3d_value(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const double wx = d[0] - a[0], wy = d[1] - a[1], wz = d[2] - a[2];
  return ux * (vy * wz - vz * wy) - uy * (vx * wz - vz * wx) + uz * (vx * wy - vy * wx);
}

/// Sign of det(b - a, c - a, d - a): positive when d lies on the side of the
/// plane abc from which a, b, c appear counter-clockwise.
inline int orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const double wx = d[0] - a[0], wy = d[1] - a[1], wz = d[2] - a[2];
  const double det = ux * (vy * wz - vz * wy) - uy * (vx * wz - vz * wx) + uz * (vx * wy - vy * wx);
  const double perm = std::abs(ux) * (std::abs(vy * wz) + std::abs(vz * wy)) +
                      std::abs(uy) * (std::abs(vx * wz) + std::abs(vz * wx)) +
                      std::abs(uz) * (std::abs(vx * wy) + std::abs(vy * wx));
  // the subtractions forming u, v, w are inexact too, hence the generous bound
  const double bound = 1e-14 * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return detail::orient3d_exact(a, b, c, d);
}

/// orient3d scaled to be invariant under scaling of the three edge vectors.
inline double orient3d_normalized(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  auto len = [&](const Point3& p) {
    return std::sqrt((p[0] - a[0]) * (p[0] - a[0]) + (p[1] - a[1]) * (p[1] - a[1]) + (p[2] - a[2]) * (p[2] - a[2]));
  };
  const double s = len(b) * len(c) * len(d);
  return s > 0 ? orient3d_value(a, b, c, d) / s : 0.0;
}

}  // namespace idealhyp
