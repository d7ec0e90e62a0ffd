#ifndef WFELA_LINALG_HPP
#define WFELA_LINALG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wfela/modular.hpp"
#include "wfela/rational.hpp"

namespace wfela {

// ---------------------------------------------------------------------------
// Dense matrices

struct DenseMatrix {
  long rows = 0, cols = 0;
  std::vector<Rational> a;

  DenseMatrix() = default;
  DenseMatrix(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Rational& at(long i, long j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Rational& at(long i, long j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static DenseMatrix identity(long n);
  DenseMatrix transposed() const;
  std::vector<Rational> col(long j) const;
  void set_col(long j, const std::vector<Rational>& v);
};

DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B);
std::vector<Rational> mul(const DenseMatrix& A, const std::vector<Rational>& x);
DenseMatrix hcat(const DenseMatrix& A, const DenseMatrix& B);
bool is_zero(const DenseMatrix& A);

// ---------------------------------------------------------------------------
// Sparse matrices (row compressed, sorted column indices)

struct SparseMatrix {
  long rows = 0, cols = 0;
  std::vector<std::vector<std::pair<long, Rational>>> row;

  SparseMatrix() = default;
  SparseMatrix(long r, long c) : rows(r), cols(c), row(static_cast<size_t>(r)) {}

  void add(long i, long j, const Rational& v);
  void append_row(std::vector<std::pair<long, Rational>> r);
  long nnz() const;

  static SparseMatrix identity(long n);
  SparseMatrix transposed() const;
  DenseMatrix dense() const;
};

SparseMatrix operator*(const SparseMatrix& A, const SparseMatrix& B);
DenseMatrix operator*(const SparseMatrix& A, const DenseMatrix& B);
SparseMatrix operator+(const SparseMatrix& A, const SparseMatrix& B);
SparseMatrix operator-(const SparseMatrix& A, const SparseMatrix& B);
SparseMatrix scale(const Rational& c, const SparseMatrix& A);
SparseMatrix vstack(const SparseMatrix& A, const SparseMatrix& B);
SparseMatrix hstack(const SparseMatrix& A, const SparseMatrix& B);
bool is_zero(const SparseMatrix& A);
bool equal(const SparseMatrix& A, const SparseMatrix& B);
std::vector<Rational> mul(const SparseMatrix& A, const std::vector<Rational>& x);
SparseMatrix from_dense(const DenseMatrix& A);

// ---------------------------------------------------------------------------
// Rank / nullspace / solves

enum class RankMode { Exact, Modular, Auto };

struct RankCertificate {
  long rank = 0;
  RankMode mode_used = RankMode::Exact;
  std::vector<long> pivot_cols;
  std::vector<std::uint64_t> primes;  // empty in exact mode
};

/// Column threshold of the Auto policy: exact at or below, modular above.
inline constexpr long kAutoExactLimit = 500;

/// Seed for the deterministic prime stream used by modular mode.
void set_prime_seed(std::uint64_t seed);
std::uint64_t prime_seed();

/// Rank of a sparse rational matrix.
///  - Exact: fraction-aware sparse Gaussian elimination.
///  - Modular: two independent random primes near 2^62; the ranks must
///    agree, otherwise the computation escalates to exact automatically.
RankCertificate rank_of(const SparseMatrix& A, RankMode mode = RankMode::Auto);
RankCertificate rank_of(const DenseMatrix& A, RankMode mode = RankMode::Auto);

/// Exact nullspace basis (columns span ker A, M*N = 0 exactly).
DenseMatrix nullspace(const SparseMatrix& A);

/// Exact RREF used by nullspace(); exposed for reuse.
struct Rref {
  SparseMatrix m;               // reduced rows (pivot entries = 1)
  std::vector<long> pivot_col;  // one per reduced row
  std::vector<long> free_cols;
};
Rref rref(const SparseMatrix& A, bool parallel = true);
Rref rref_serial(const SparseMatrix& A);

/// Exact solve of a nonsingular square system.  Throws std::runtime_error
/// carrying the computed rank when the matrix is singular.
std::vector<Rational> solve_square(const DenseMatrix& M, const std::vector<Rational>& b);

/// Exact LU factorization for repeated solves with the same square matrix.
class LuFactors {
 public:
  explicit LuFactors(const DenseMatrix& M);  // throws on singular
  std::vector<Rational> solve(const std::vector<Rational>& b) const;
  long n() const { return n_; }

 private:
  long n_;
  DenseMatrix lu_;
  std::vector<long> perm_;
};

/// Basis of the G-orthogonal complement of span(A) inside span(B).
/// Requires span(A) subset of span(B) and G symmetric positive definite.
DenseMatrix gram_complement(const DenseMatrix& A, const DenseMatrix& B, const DenseMatrix& G);

/// Symmetric positive definiteness via pivoted symmetric elimination
/// (Sylvester criterion; exact, no eigenvalues).
bool spd_check(const DenseMatrix& G);

/// rank(M restricted to ker C) = rank([C; M]) - rank(C).
long rank_on_kernel(const SparseMatrix& C, const SparseMatrix& M, RankMode mode = RankMode::Auto);

/// Columns of W that form a basis of the column space of W.  Pivot columns
/// are selected by a modular elimination (independence of the selected
/// columns is thereby certified exactly); the expected rank, if nonnegative,
/// is checked against the modular rank.
std::vector<long> independent_columns(const DenseMatrix& W, long expected_rank = -1);

}  // namespace wfela

#endif
