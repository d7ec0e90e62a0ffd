#include "wfela/modular.hpp"

#include <omp.h>

namespace wfela {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  Mod64 m{n};
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic Miller-Rabin bases for n < 3.3e24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = m.pow(a % n, d);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = m.mul(x, x);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::uint64_t> random_primes(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> out;
  while (static_cast<int>(out.size()) < count) {
    std::uint64_t c = (1ULL << 61) + (rng.next() & ((1ULL << 61) - 1));
    c |= 1;
    while (!is_prime_u64(c)) c += 2;
    bool dup = false;
    for (std::uint64_t p : out) dup = dup || (p == c);
    if (!dup) out.push_back(c);
  }
  return out;
}

bool reduce_mod(const Rational& q, const Mod64& m, std::uint64_t& out) {
  std::uint64_t num = mpz_fdiv_ui(q.get_num().get_mpz_t(), m.p);
  std::uint64_t den = mpz_fdiv_ui(q.get_den().get_mpz_t(), m.p);
  if (den == 0) return false;
  out = m.mul(num, m.inv(den));
  return true;
}

namespace {

template <bool Parallel>
long rank_impl(ModMatrix& M, std::vector<long>* pivot_cols) {
  const Mod64 m = M.m;
  long r = 0;
  if (pivot_cols) pivot_cols->clear();
  for (long c = 0; c < M.cols && r < M.rows; ++c) {
    long piv = -1;
    for (long i = r; i < M.rows; ++i) {
      if (M.at(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) {
      for (long j = c; j < M.cols; ++j) std::swap(M.at(piv, j), M.at(r, j));
    }
    const std::uint64_t inv = m.inv(M.at(r, c));
    for (long j = c; j < M.cols; ++j) M.at(r, j) = m.mul(M.at(r, j), inv);

    std::uint64_t* prow = &M.at(r, 0);
#pragma omp parallel for schedule(dynamic, 16) if (Parallel && M.rows - r > 64)
    for (long i = r + 1; i < M.rows; ++i) {
      std::uint64_t f = M.at(i, c);
      if (f == 0) continue;
      std::uint64_t* irow = &M.at(i, 0);
      for (long j = c; j < M.cols; ++j) irow[j] = m.sub(irow[j], m.mul(f, prow[j]));
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

}  // namespace

long modular_rank(ModMatrix& M, std::vector<long>* pivot_cols) { return rank_impl<true>(M, pivot_cols); }

long modular_rank_serial(ModMatrix& M, std::vector<long>* pivot_cols) { return rank_impl<false>(M, pivot_cols); }

}  // namespace wfela
