// Serial vs OpenMP-parallel kernel timings: modular elimination, exact
// sparse RREF, and the sparse product used throughout the rank checks.
#include <chrono>
#include <iostream>

#include "wfela/linalg.hpp"
#include "wfela/rng.hpp"

using namespace wfela;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0)
             .count() /
         1000.0;
}

SparseMatrix random_sparse(Rng& rng, long rows, long cols, int per_row) {
  SparseMatrix A(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (int k = 0; k < per_row; ++k)
      A.add(i, static_cast<long>(rng.below(static_cast<std::uint64_t>(cols))), rng.small_int(-4, 4));
  return A;
}

}  // namespace

int main() {
  std::cout << "kernel, size, serial_ms, openmp_ms, agree\n";

  // Modular elimination.
  for (long n : {256L, 512L, 1024L}) {
    auto primes = random_primes(1, 42);
    Mod64 m{primes[0]};
    Rng rng(7);
    ModMatrix A(m, n, n), B(m, n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        std::uint64_t v = rng.next() % m.p;
        A.at(i, j) = v;
        B.at(i, j) = v;
      }
    auto t0 = std::chrono::steady_clock::now();
    long r1 = modular_rank_serial(A);
    double ts = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    long r2 = modular_rank(B);
    double tp = ms_since(t0);
    std::cout << "modular_rank, " << n << "x" << n << ", " << ts << ", " << tp << ", "
              << (r1 == r2 ? "yes" : "NO") << "\n";
  }

  // Exact sparse RREF.
  for (long n : {200L, 400L}) {
    Rng rng(11);
    SparseMatrix A = random_sparse(rng, n + n / 4, n, 6);
    auto t0 = std::chrono::steady_clock::now();
    Rref r1 = rref_serial(A);
    double ts = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    Rref r2 = rref(A, true);
    double tp = ms_since(t0);
    std::cout << "rref, " << (n + n / 4) << "x" << n << ", " << ts << ", " << tp << ", "
              << (r1.m.rows == r2.m.rows ? "yes" : "NO") << "\n";
  }

  // Sparse product (OpenMP rows) has no separate serial twin; time it for scale.
  {
    Rng rng(13);
    SparseMatrix A = random_sparse(rng, 2000, 2000, 8);
    SparseMatrix B = random_sparse(rng, 2000, 2000, 8);
    auto t0 = std::chrono::steady_clock::now();
    SparseMatrix C = A * B;
    double tp = ms_since(t0);
    std::cout << "sparse_product, 2000x2000, -, " << tp << ", -\n";
    (void)C;
  }
  return 0;
}
