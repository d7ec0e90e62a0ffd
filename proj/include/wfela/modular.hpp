#ifndef WFELA_MODULAR_HPP
#define WFELA_MODULAR_HPP

#include <cstdint>
#include <vector>

#include "wfela/rational.hpp"
#include "wfela/rng.hpp"

namespace wfela {

/// Arithmetic mod a prime just below 2^62.  Products fit in unsigned
/// __int128, so a*b % p is a single wide multiply.
struct Mod64 {
  std::uint64_t p;

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }
};

bool is_prime_u64(std::uint64_t n);

/// Random primes in [2^61, 2^62), deterministic given the seed.
std::vector<std::uint64_t> random_primes(int count, std::uint64_t seed);

/// Reduce p/q mod m.  Returns false when the denominator vanishes mod m
/// (the caller should pick another prime).
bool reduce_mod(const Rational& q, const Mod64& m, std::uint64_t& out);

/// Row-major dense matrix over Z_p.
struct ModMatrix {
  Mod64 m;
  long rows = 0, cols = 0;
  std::vector<std::uint64_t> a;

  ModMatrix(Mod64 mod, long r, long c) : m(mod), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  std::uint64_t& at(long i, long j) { return a[static_cast<size_t>(i) * cols + j]; }
  const std::uint64_t& at(long i, long j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

/// Gaussian elimination rank over Z_p.  `pivot_cols`, when non-null, receives
/// the pivot column indices (certifies exact independence of those columns).
/// OpenMP-parallel row updates.
long modular_rank(ModMatrix& M, std::vector<long>* pivot_cols = nullptr);

/// Serial reference implementation kept for testing and benchmarking.
long modular_rank_serial(ModMatrix& M, std::vector<long>* pivot_cols = nullptr);

}  // namespace wfela

#endif
