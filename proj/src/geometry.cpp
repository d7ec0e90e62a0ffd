#include "wfela/geometry.hpp"

#include <stdexcept>

namespace wfela {

bool exact_sqrt(const Rational& q, Rational& out) {
  if (sgn(q) < 0) return false;
  const BigInt num = q.get_num(), den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
  BigInt rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  out = Rational(rn) / Rational(rd);
  return true;
}

std::array<Rational, 4> barycentric_tet(const std::array<Vec3, 4>& v, const Vec3& p) {
  const Rational vol = signed_volume6(v[0], v[1], v[2], v[3]);
  if (vol == 0) throw std::invalid_argument("barycentric_tet: degenerate tetrahedron");
  std::array<Rational, 4> lam;
  lam[0] = signed_volume6(p, v[1], v[2], v[3]) / vol;
  lam[1] = signed_volume6(v[0], p, v[2], v[3]) / vol;
  lam[2] = signed_volume6(v[0], v[1], p, v[3]) / vol;
  lam[3] = signed_volume6(v[0], v[1], v[2], p) / vol;
  return lam;
}

std::array<Rational, 3> barycentric_tri(const std::array<Vec3, 3>& v, const Vec3& p) {
  const Vec3 e1 = v[1] - v[0], e2 = v[2] - v[0], d = p - v[0];
  const Vec3 n = cross(e1, e2);
  if (dot(n, n) == 0) throw std::invalid_argument("barycentric_tri: degenerate triangle");
  if (dot(n, d) != 0) throw std::invalid_argument("barycentric_tri: point off the plane");
  // Solve d = a e1 + b e2 via the Gram system.
  const Rational g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
  const Rational det = g11 * g22 - g12 * g12;
  const Rational r1 = dot(e1, d), r2 = dot(e2, d);
  const Rational a = (g22 * r1 - g12 * r2) / det;
  const Rational b = (g11 * r2 - g12 * r1) / det;
  return {1 - a - b, a, b};
}

}  // namespace wfela
