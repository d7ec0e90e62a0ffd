#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "wfela/linalg.hpp"
#include "wfela/rng.hpp"

using namespace wfela;

namespace {

DenseMatrix random_dense(Rng& rng, long r, long c, long lo = -5, long hi = 5) {
  DenseMatrix M(r, c);
  for (auto& v : M.a) v = rng.small_int(lo, hi);
  return M;
}

}  // namespace

TEST_CASE("rank of identity and zero") {
  CHECK(rank_of(SparseMatrix::identity(5)).rank == 5);
  SparseMatrix Z(7, 3);
  CHECK(rank_of(Z).rank == 0);
}

TEST_CASE("Vandermonde rank via determinant oracle") {
  // Oracle: det = prod_{i<j} (x_j - x_i) != 0 for distinct nodes.
  std::vector<Rational> x{frac(1, 2), Rational(-3), frac(7, 5), Rational(0)};
  Rational det_oracle = 1;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = i + 1; j < x.size(); ++j) det_oracle *= (x[j] - x[i]);
  REQUIRE(det_oracle != 0);
  DenseMatrix V(4, 4);
  for (long i = 0; i < 4; ++i) {
    Rational p = 1;
    for (long j = 0; j < 4; ++j) {
      V.at(i, j) = p;
      p *= x[i];
    }
  }
  CHECK(rank_of(V).rank == 4);
}

TEST_CASE("nullspace basics") {
  SparseMatrix M(1, 2);
  M.add(0, 0, 1);
  M.add(0, 1, 1);
  DenseMatrix N = nullspace(M);
  REQUIRE(N.cols == 1);
  CHECK(N.at(0, 0) * Rational(-1) == N.at(1, 0));  // (1,-1) up to scale

  // Full column rank -> zero columns.
  Rng rng(7);
  DenseMatrix A = random_dense(rng, 6, 3);
  while (rank_of(A).rank < 3) A = random_dense(rng, 6, 3);
  CHECK(nullspace(from_dense(A)).cols == 0);
}

TEST_CASE("random 10x20 rank-10 nullspace with residual check") {
  Rng rng(11);
  DenseMatrix B = random_dense(rng, 10, 10);
  while (rank_of(B).rank < 10) B = random_dense(rng, 10, 10);
  DenseMatrix C = random_dense(rng, 10, 10);
  DenseMatrix M = hcat(B, B * C);  // 10 x 20, rank 10
  SparseMatrix Ms = from_dense(M);
  REQUIRE(rank_of(Ms).rank == 10);
  DenseMatrix N = nullspace(Ms);
  CHECK(N.cols == 10);
  CHECK(is_zero(from_dense(M) * N));
  // rank([M; N']) = cols(M)
  SparseMatrix S = vstack(Ms, from_dense(N.transposed()));
  CHECK(rank_of(S).rank == 20);
}

TEST_CASE("modular and exact ranks agree; serial kernel matches") {
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    DenseMatrix A = random_dense(rng, 12, 9);
    SparseMatrix As = from_dense(A);
    long re = rank_of(As, RankMode::Exact).rank;
    long rm = rank_of(As, RankMode::Modular).rank;
    CHECK(re == rm);

    auto primes = random_primes(1, 1000 + trial);
    ModMatrix M1(Mod64{primes[0]}, A.rows, A.cols);
    ModMatrix M2(Mod64{primes[0]}, A.rows, A.cols);
    for (long i = 0; i < A.rows; ++i)
      for (long j = 0; j < A.cols; ++j) {
        std::uint64_t v;
        REQUIRE(reduce_mod(A.at(i, j), M1.m, v));
        M1.at(i, j) = v;
        M2.at(i, j) = v;
      }
    CHECK(modular_rank(M1) == modular_rank_serial(M2));
  }
}

TEST_CASE("modular disagreement escalates to exact") {
  set_prime_seed(424242);
  auto primes = random_primes(2, 424242);  // the pair the modular path draws first
  DenseMatrix M(2, 2);
  M.at(0, 0) = Rational(BigInt(primes[0]));
  M.at(1, 1) = Rational(BigInt(primes[0]));
  RankCertificate c = rank_of(from_dense(M), RankMode::Modular);
  CHECK(c.rank == 2);
  CHECK(c.mode_used == RankMode::Exact);
  set_prime_seed(0x77f3a1u);
}

TEST_CASE("solve identity and singular witness") {
  DenseMatrix I = DenseMatrix::identity(4);
  std::vector<Rational> b{Rational(1), Rational(-2), frac(3, 7), Rational(0)};
  CHECK(solve_square(I, b) == b);

  DenseMatrix S(2, 2);
  S.at(0, 0) = 1;
  S.at(0, 1) = 2;
  S.at(1, 0) = 2;
  S.at(1, 1) = 4;
  CHECK_THROWS_WITH_AS(solve_square(S, {Rational(1), Rational(1)}),
                       doctest::Contains("rank 1"), std::runtime_error);
}

TEST_CASE("LU repeated solves") {
  Rng rng(5);
  DenseMatrix A = random_dense(rng, 8, 8);
  while (rank_of(A).rank < 8) A = random_dense(rng, 8, 8);
  LuFactors lu(A);
  for (int t = 0; t < 3; ++t) {
    std::vector<Rational> x(8);
    for (auto& v : x) v = rng.small_int(-9, 9);
    auto b = mul(A, x);
    CHECK(lu.solve(b) == x);
  }
}

TEST_CASE("gram complement") {
  DenseMatrix A(2, 1), B = DenseMatrix::identity(2), G = DenseMatrix::identity(2);
  A.at(0, 0) = 1;
  DenseMatrix C = gram_complement(A, B, G);
  REQUIRE(C.cols == 1);
  CHECK(C.at(0, 0) == 0);
  CHECK(C.at(1, 0) != 0);
}

TEST_CASE("spd check") {
  DenseMatrix G(2, 2);
  G.at(0, 0) = 2;
  G.at(0, 1) = 1;
  G.at(1, 0) = 1;
  G.at(1, 1) = 2;
  CHECK(spd_check(G));
  G.at(0, 0) = 1;
  G.at(0, 1) = 2;
  G.at(1, 0) = 2;
  G.at(1, 1) = 1;
  CHECK(!spd_check(G));  // det < 0
  G.at(1, 0) = 3;
  CHECK(!spd_check(G));  // not symmetric
}

TEST_CASE("rank_on_kernel identity") {
  // C = [1 1 0], M = identity: rank of identity restricted to a 2-dim kernel is 2.
  SparseMatrix C(1, 3);
  C.add(0, 0, 1);
  C.add(0, 1, 1);
  CHECK(rank_on_kernel(C, SparseMatrix::identity(3)) == 2);
}

TEST_CASE("independent columns certified") {
  Rng rng(31);
  DenseMatrix B = random_dense(rng, 6, 3);
  while (rank_of(B).rank < 3) B = random_dense(rng, 6, 3);
  DenseMatrix W = hcat(B, B);  // rank 3, 6 columns
  auto cols = independent_columns(W, 3);
  REQUIRE(cols.size() == 3);
  DenseMatrix S(6, 3);
  for (int k = 0; k < 3; ++k) S.set_col(k, W.col(cols[k]));
  CHECK(rank_of(S, RankMode::Exact).rank == 3);
}

TEST_CASE("rref serial matches parallel") {
  Rng rng(41);
  DenseMatrix A = random_dense(rng, 15, 12);
  auto r1 = rref(from_dense(A), true);
  auto r2 = rref_serial(from_dense(A));
  CHECK(r1.m.rows == r2.m.rows);
  CHECK(r1.pivot_col.size() == r2.pivot_col.size());
}
