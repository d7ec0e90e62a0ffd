#ifndef WFELA_GEOMETRY_HPP
#define WFELA_GEOMETRY_HPP

#include <array>

#include "wfela/rational.hpp"

namespace wfela {

struct Vec3 {
  std::array<Rational, 3> c{Rational(0), Rational(0), Rational(0)};

  Vec3() = default;
  Vec3(Rational x, Rational y, Rational z) : c{std::move(x), std::move(y), std::move(z)} {}

  Rational& operator[](int i) { return c[i]; }
  const Rational& operator[](int i) const { return c[i]; }

  bool operator==(const Vec3& o) const { return c == o.c; }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(const Rational& s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Rational dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Rational det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

/// 6 * signed volume of the tetrahedron (v0,v1,v2,v3).
inline Rational signed_volume6(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& v3) {
  return det3(v1 - v0, v2 - v0, v3 - v0);
}

/// Exact square root of a nonnegative rational if it is a perfect square.
bool exact_sqrt(const Rational& q, Rational& out);

/// Barycentric coordinates of p with respect to a tetrahedron.
std::array<Rational, 4> barycentric_tet(const std::array<Vec3, 4>& v, const Vec3& p);

/// Barycentric coordinates of an in-plane point p with respect to a triangle
/// embedded in 3D (p must lie on the plane; checked).
std::array<Rational, 3> barycentric_tri(const std::array<Vec3, 3>& v, const Vec3& p);

}  // namespace wfela

#endif
