#ifndef WFELA_RATIONAL_HPP
#define WFELA_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfela {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parse "p/q", "p", or a decimal integer string into an exact rational.
inline Rational rat_parse(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
  q.canonicalize();
  return q;
}

/// Canonical "p/q" (or "p" when the denominator is 1).
inline std::string rat_str(const Rational& q) { return q.get_str(); }

/// n/d in canonical form.  Always use this instead of the two-argument
/// mpq_class constructor, which does not canonicalize.
inline Rational frac(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

inline int sgn(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

}  // namespace wfela

#endif
