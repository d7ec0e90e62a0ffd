#include "wfela/linalg.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace wfela {

// ---------------------------------------------------------------------------
// Dense

DenseMatrix DenseMatrix::identity(long n) {
  DenseMatrix I(n, n);
  for (long i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix T(cols, rows);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) T.at(j, i) = at(i, j);
  return T;
}

std::vector<Rational> DenseMatrix::col(long j) const {
  std::vector<Rational> v(rows);
  for (long i = 0; i < rows; ++i) v[i] = at(i, j);
  return v;
}

void DenseMatrix::set_col(long j, const std::vector<Rational>& v) {
  for (long i = 0; i < rows; ++i) at(i, j) = v[i];
}

DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C(A.rows, B.cols);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < A.rows; ++i) {
    for (long k = 0; k < A.cols; ++k) {
      const Rational& aik = A.at(i, k);
      if (aik == 0) continue;
      for (long j = 0; j < B.cols; ++j) {
        if (B.at(k, j) != 0) C.at(i, j) += aik * B.at(k, j);
      }
    }
  }
  return C;
}

std::vector<Rational> mul(const DenseMatrix& A, const std::vector<Rational>& x) {
  std::vector<Rational> y(A.rows, Rational(0));
  for (long i = 0; i < A.rows; ++i)
    for (long j = 0; j < A.cols; ++j)
      if (A.at(i, j) != 0 && x[j] != 0) y[i] += A.at(i, j) * x[j];
  return y;
}

DenseMatrix hcat(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C(A.rows, A.cols + B.cols);
  for (long i = 0; i < A.rows; ++i) {
    for (long j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (long j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  return C;
}

bool is_zero(const DenseMatrix& A) {
  for (const auto& v : A.a)
    if (v != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Sparse

void SparseMatrix::add(long i, long j, const Rational& v) {
  if (v == 0) return;
  auto& r = row[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const std::pair<long, Rational>& e, long c) { return e.first < c; });
  if (it != r.end() && it->first == j) {
    it->second += v;
    if (it->second == 0) r.erase(it);
  } else {
    r.insert(it, {j, v});
  }
}

void SparseMatrix::append_row(std::vector<std::pair<long, Rational>> r) {
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<long, Rational>> clean;
  for (auto& e : r) {
    if (e.second == 0) continue;
    if (!clean.empty() && clean.back().first == e.first)
      clean.back().second += e.second;
    else
      clean.push_back(e);
  }
  clean.erase(std::remove_if(clean.begin(), clean.end(), [](const auto& e) { return e.second == 0; }),
              clean.end());
  row.push_back(std::move(clean));
  ++rows;
}

long SparseMatrix::nnz() const {
  long n = 0;
  for (const auto& r : row) n += static_cast<long>(r.size());
  return n;
}

SparseMatrix SparseMatrix::identity(long n) {
  SparseMatrix I(n, n);
  for (long i = 0; i < n; ++i) I.row[i].push_back({i, Rational(1)});
  return I;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix T(cols, rows);
  for (long i = 0; i < rows; ++i)
    for (const auto& [j, v] : row[i]) T.row[j].push_back({i, v});
  return T;
}

DenseMatrix SparseMatrix::dense() const {
  DenseMatrix D(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (const auto& [j, v] : row[i]) D.at(i, j) = v;
  return D;
}

SparseMatrix operator*(const SparseMatrix& A, const SparseMatrix& B) {
  SparseMatrix C(A.rows, B.cols);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < A.rows; ++i) {
    std::vector<std::pair<long, Rational>> acc;
    for (const auto& [k, av] : A.row[i]) {
      for (const auto& [j, bv] : B.row[k]) acc.push_back({j, av * bv});
    }
    std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& out = C.row[i];
    for (auto& e : acc) {
      if (!out.empty() && out.back().first == e.first)
        out.back().second += e.second;
      else
        out.push_back(std::move(e));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
  }
  return C;
}

DenseMatrix operator*(const SparseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C(A.rows, B.cols);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < A.rows; ++i)
    for (const auto& [k, av] : A.row[i])
      for (long j = 0; j < B.cols; ++j)
        if (B.at(k, j) != 0) C.at(i, j) += av * B.at(k, j);
  return C;
}

namespace {
SparseMatrix combine(const SparseMatrix& A, const SparseMatrix& B, int sb) {
  SparseMatrix C(A.rows, A.cols);
  for (long i = 0; i < A.rows; ++i) {
    auto r = A.row[i];
    for (const auto& [j, v] : B.row[i]) r.push_back({j, sb > 0 ? v : Rational(-v)});
    C.row[i].clear();
    C.rows = A.rows;
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& out = C.row[i];
    for (auto& e : r) {
      if (!out.empty() && out.back().first == e.first)
        out.back().second += e.second;
      else
        out.push_back(std::move(e));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
  }
  return C;
}
}  // namespace

SparseMatrix operator+(const SparseMatrix& A, const SparseMatrix& B) { return combine(A, B, +1); }
SparseMatrix operator-(const SparseMatrix& A, const SparseMatrix& B) { return combine(A, B, -1); }

SparseMatrix scale(const Rational& c, const SparseMatrix& A) {
  SparseMatrix B = A;
  if (c == 0) {
    for (auto& r : B.row) r.clear();
    return B;
  }
  for (auto& r : B.row)
    for (auto& e : r) e.second *= c;
  return B;
}

SparseMatrix vstack(const SparseMatrix& A, const SparseMatrix& B) {
  SparseMatrix C(0, std::max(A.cols, B.cols));
  C.row.reserve(A.rows + B.rows);
  for (const auto& r : A.row) C.row.push_back(r);
  for (const auto& r : B.row) C.row.push_back(r);
  C.rows = A.rows + B.rows;
  return C;
}

SparseMatrix hstack(const SparseMatrix& A, const SparseMatrix& B) {
  SparseMatrix C(std::max(A.rows, B.rows), A.cols + B.cols);
  for (long i = 0; i < C.rows; ++i) {
    if (i < A.rows) C.row[i] = A.row[i];
    if (i < B.rows)
      for (const auto& [j, v] : B.row[i]) C.row[i].push_back({j + A.cols, v});
  }
  return C;
}

bool is_zero(const SparseMatrix& A) {
  for (const auto& r : A.row)
    if (!r.empty()) return false;
  return true;
}

bool equal(const SparseMatrix& A, const SparseMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols) return false;
  for (long i = 0; i < A.rows; ++i)
    if (A.row[i] != B.row[i]) return false;
  return true;
}

std::vector<Rational> mul(const SparseMatrix& A, const std::vector<Rational>& x) {
  std::vector<Rational> y(A.rows, Rational(0));
  for (long i = 0; i < A.rows; ++i)
    for (const auto& [j, v] : A.row[i]) y[i] += v * x[j];
  return y;
}

SparseMatrix from_dense(const DenseMatrix& A) {
  SparseMatrix S(A.rows, A.cols);
  for (long i = 0; i < A.rows; ++i)
    for (long j = 0; j < A.cols; ++j)
      if (A.at(i, j) != 0) S.row[i].push_back({j, A.at(i, j)});
  return S;
}

// ---------------------------------------------------------------------------
// Exact sparse RREF

namespace {

using Row = std::vector<std::pair<long, Rational>>;

// r -= f * p, sorted merge
Row axpy(const Row& r, const Rational& f, const Row& p) {
  Row out;
  out.reserve(r.size() + p.size());
  size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (j >= p.size() || (i < r.size() && r[i].first < p[j].first)) {
      out.push_back(r[i++]);
    } else if (i >= r.size() || p[j].first < r[i].first) {
      out.push_back({p[j].first, -f * p[j].second});
      ++j;
    } else {
      Rational v = r[i].second - f * p[j].second;
      if (v != 0) out.push_back({r[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

struct RrefWork {
  std::vector<Row> rows;
  std::vector<char> done;
  std::vector<long> colcount;           // over active (not yet pivot) rows
  std::vector<std::vector<long>> colrows;  // possibly stale row lists per column

  const Rational* find(long i, long c) const {
    const Row& r = rows[i];
    auto it = std::lower_bound(r.begin(), r.end(), c,
                               [](const std::pair<long, Rational>& e, long col) { return e.first < col; });
    if (it != r.end() && it->first == c) return &it->second;
    return nullptr;
  }
};

}  // namespace

Rref rref_impl(const SparseMatrix& A, bool parallel) {
  RrefWork w;
  w.rows = A.row;
  w.done.assign(A.rows, 0);
  w.colcount.assign(A.cols, 0);
  w.colrows.assign(A.cols, {});
  auto rebuild_colrows = [&]() {
    for (auto& v : w.colrows) v.clear();
    for (long i = 0; i < A.rows; ++i)
      for (const auto& [j, v] : w.rows[i]) w.colrows[j].push_back(i);
  };
  for (long i = 0; i < A.rows; ++i)
    for (const auto& [j, v] : w.rows[i]) {
      ++w.colcount[j];
      w.colrows[j].push_back(i);
    }
  size_t colrows_budget = 0;
  for (const auto& v : w.colrows) colrows_budget += v.size();
  colrows_budget = 4 * colrows_budget + (1 << 16);

  std::vector<long> pivot_col, pivot_row;

  // Forward pass: eliminate the pivot column from active rows only.
  for (;;) {
    long best = -1;
    for (long i = 0; i < A.rows; ++i) {
      if (w.done[i] || w.rows[i].empty()) continue;
      if (best < 0 || w.rows[i].size() < w.rows[best].size()) best = i;
    }
    if (best < 0) break;
    long pc = -1;
    for (const auto& [j, v] : w.rows[best]) {
      if (pc < 0 || w.colcount[j] < w.colcount[pc]) pc = j;
    }
    const Rational pv = *w.find(best, pc);
    if (pv != 1) {
      Rational inv = 1 / pv;
      for (auto& e : w.rows[best]) e.second *= inv;
    }

    std::vector<long> targets;
    {
      auto& lst = w.colrows[pc];
      std::vector<long> fresh;
      for (long i : lst) {
        if (i == best || w.done[i]) continue;
        if (w.find(i, pc) && std::find(targets.begin(), targets.end(), i) == targets.end()) targets.push_back(i);
      }
      fresh = targets;
      fresh.push_back(best);
      lst = std::move(fresh);
    }

    std::vector<Row> updated(targets.size());
#pragma omp parallel for schedule(dynamic, 8) if (parallel && targets.size() > 32)
    for (size_t t = 0; t < targets.size(); ++t) {
      long i = targets[t];
      const Rational f = *w.find(i, pc);
      updated[t] = axpy(w.rows[i], f, w.rows[best]);
    }
    for (size_t t = 0; t < targets.size(); ++t) {
      long i = targets[t];
      for (const auto& [j, v] : w.rows[i]) --w.colcount[j];
      for (const auto& [j, v] : updated[t]) {
        ++w.colcount[j];
        w.colrows[j].push_back(i);
      }
      w.rows[i] = std::move(updated[t]);
    }
    for (const auto& [j, v] : w.rows[best]) --w.colcount[j];
    w.done[best] = 1;
    pivot_col.push_back(pc);
    pivot_row.push_back(best);

    // The lazy column lists accumulate stale references; compact when they
    // outgrow the live nonzero count.
    size_t lsize = 0;
    for (const auto& v : w.colrows) lsize += v.size();
    if (lsize > colrows_budget) {
      rebuild_colrows();
      size_t fresh2 = 0;
      for (const auto& v : w.colrows) fresh2 += v.size();
      colrows_budget = 4 * fresh2 + (1 << 16);
    }
  }

  // Backward pass: clear later pivot columns out of earlier pivot rows,
  // processing pivots in reverse column order so subtrahends are reduced.
  const size_t npiv = pivot_col.size();
  std::vector<size_t> order(npiv);
  for (size_t k = 0; k < npiv; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pivot_col[a] < pivot_col[b]; });
  std::vector<long> piv_of_col(A.cols, -1);
  for (size_t k = 0; k < npiv; ++k) piv_of_col[pivot_col[k]] = static_cast<long>(k);
  for (size_t oi = npiv; oi-- > 0;) {
    size_t k = order[oi];
    Row& row = w.rows[pivot_row[k]];
    for (;;) {
      long hit = -1;
      Rational f;
      for (const auto& [j, v] : row) {
        long pk = piv_of_col[j];
        if (pk >= 0 && j != pivot_col[k]) {
          hit = pk;
          f = v;
          break;
        }
      }
      if (hit < 0) break;
      row = axpy(row, f, w.rows[pivot_row[hit]]);
    }
  }

  Rref out;
  out.m.rows = 0;
  out.m.cols = A.cols;
  for (size_t k : order) {
    out.m.append_row(w.rows[pivot_row[k]]);
    out.pivot_col.push_back(pivot_col[k]);
  }
  std::vector<char> is_piv(A.cols, 0);
  for (long c : out.pivot_col) is_piv[c] = 1;
  for (long c = 0; c < A.cols; ++c)
    if (!is_piv[c]) out.free_cols.push_back(c);
  return out;
}

Rref rref(const SparseMatrix& A, bool parallel) { return rref_impl(A, parallel); }
Rref rref_serial(const SparseMatrix& A) { return rref_impl(A, false); }

DenseMatrix nullspace(const SparseMatrix& A) {
  Rref R = rref(A);
  const long n = A.cols;
  DenseMatrix N(n, static_cast<long>(R.free_cols.size()));
  for (size_t k = 0; k < R.free_cols.size(); ++k) {
    long f = R.free_cols[k];
    N.at(f, static_cast<long>(k)) = 1;
    for (long r = 0; r < R.m.rows; ++r) {
      for (const auto& [j, v] : R.m.row[r]) {
        if (j == f) {
          N.at(R.pivot_col[r], static_cast<long>(k)) = -v;
          break;
        }
        if (j > f) break;
      }
    }
  }
  return N;
}

// ---------------------------------------------------------------------------
// Rank

namespace {
std::uint64_t g_prime_seed = 0x77f3a1u;
}

void set_prime_seed(std::uint64_t seed) { g_prime_seed = seed; }
std::uint64_t prime_seed() { return g_prime_seed; }

namespace {

// Reduce a sparse rational matrix mod p; false if any denominator vanishes.
bool to_mod(const SparseMatrix& A, const Mod64& m, ModMatrix& out) {
  for (long i = 0; i < A.rows; ++i) {
    for (const auto& [j, v] : A.row[i]) {
      std::uint64_t x;
      if (!reduce_mod(v, m, x)) return false;
      out.at(i, j) = x;
    }
  }
  return true;
}

RankCertificate rank_exact_sparse(const SparseMatrix& A) {
  Rref R = rref(A);
  RankCertificate c;
  c.rank = R.m.rows;
  c.mode_used = RankMode::Exact;
  c.pivot_cols = R.pivot_col;
  return c;
}

RankCertificate rank_modular_sparse(const SparseMatrix& A) {
  RankCertificate c;
  c.mode_used = RankMode::Modular;
  std::uint64_t seed = g_prime_seed;
  for (int attempts = 0; attempts < 8; ++attempts) {
    auto primes = random_primes(2, seed + attempts);
    ModMatrix M1(Mod64{primes[0]}, A.rows, A.cols);
    ModMatrix M2(Mod64{primes[1]}, A.rows, A.cols);
    if (!to_mod(A, M1.m, M1) || !to_mod(A, M2.m, M2)) continue;  // denominator hit, redraw
    std::vector<long> piv;
    long r1 = modular_rank(M1, &piv);
    long r2 = modular_rank(M2, nullptr);
    if (r1 == r2) {
      c.rank = r1;
      c.primes = primes;
      c.pivot_cols = piv;
      return c;
    }
    // Disagreement: escalate to exact automatically.
    return rank_exact_sparse(A);
  }
  return rank_exact_sparse(A);
}

}  // namespace

RankCertificate rank_of(const SparseMatrix& A, RankMode mode) {
  if (mode == RankMode::Auto) mode = (A.cols > kAutoExactLimit) ? RankMode::Modular : RankMode::Exact;
  if (mode == RankMode::Exact) return rank_exact_sparse(A);
  return rank_modular_sparse(A);
}

RankCertificate rank_of(const DenseMatrix& A, RankMode mode) { return rank_of(from_dense(A), mode); }

long rank_on_kernel(const SparseMatrix& C, const SparseMatrix& M, RankMode mode) {
  SparseMatrix S = vstack(C, M);
  return rank_of(S, mode).rank - rank_of(C, mode).rank;
}

std::vector<long> independent_columns(const DenseMatrix& W, long expected_rank) {
  std::uint64_t seed = g_prime_seed ^ 0x9e37u;
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto primes = random_primes(2, seed + attempt);
    ModMatrix M1(Mod64{primes[0]}, W.rows, W.cols);
    ModMatrix M2(Mod64{primes[1]}, W.rows, W.cols);
    bool ok = true;
    for (long i = 0; i < W.rows && ok; ++i)
      for (long j = 0; j < W.cols && ok; ++j) {
        if (W.at(i, j) == 0) continue;
        std::uint64_t x, y;
        ok = reduce_mod(W.at(i, j), M1.m, x) && reduce_mod(W.at(i, j), M2.m, y);
        if (ok) {
          M1.at(i, j) = x;
          M2.at(i, j) = y;
        }
      }
    if (!ok) continue;
    std::vector<long> piv;
    long r1 = modular_rank(M1, &piv);
    long r2 = modular_rank(M2, nullptr);
    if (r1 != r2) continue;
    if (expected_rank >= 0 && r1 != expected_rank) continue;
    return piv;
  }
  throw std::runtime_error("independent_columns: modular selection failed");
}

// ---------------------------------------------------------------------------
// Solves, complements, SPD

LuFactors::LuFactors(const DenseMatrix& M) : n_(M.rows), lu_(M), perm_(M.rows) {
  if (M.rows != M.cols) throw std::invalid_argument("LuFactors: matrix not square");
  for (long i = 0; i < n_; ++i) perm_[i] = i;
  for (long k = 0; k < n_; ++k) {
    long piv = -1;
    for (long i = k; i < n_; ++i) {
      if (lu_.at(i, k) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) {
      long r = rank_of(M, M.cols > kAutoExactLimit ? RankMode::Modular : RankMode::Exact).rank;
      throw std::runtime_error("solve_square: singular matrix (rank " + std::to_string(r) + " of " +
                               std::to_string(n_) + ")");
    }
    if (piv != k) {
      for (long j = 0; j < n_; ++j) std::swap(lu_.at(piv, j), lu_.at(k, j));
      std::swap(perm_[piv], perm_[k]);
    }
    const Rational inv = 1 / lu_.at(k, k);
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = k + 1; i < n_; ++i) {
      if (lu_.at(i, k) == 0) continue;
      Rational f = lu_.at(i, k) * inv;
      lu_.at(i, k) = f;
      for (long j = k + 1; j < n_; ++j) {
        if (lu_.at(k, j) != 0) lu_.at(i, j) -= f * lu_.at(k, j);
      }
    }
  }
}

std::vector<Rational> LuFactors::solve(const std::vector<Rational>& b) const {
  std::vector<Rational> y(n_);
  for (long i = 0; i < n_; ++i) {
    Rational s = b[perm_[i]];
    for (long j = 0; j < i; ++j)
      if (lu_.at(i, j) != 0 && y[j] != 0) s -= lu_.at(i, j) * y[j];
    y[i] = std::move(s);
  }
  std::vector<Rational> x(n_);
  for (long i = n_ - 1; i >= 0; --i) {
    Rational s = y[i];
    for (long j = i + 1; j < n_; ++j)
      if (lu_.at(i, j) != 0 && x[j] != 0) s -= lu_.at(i, j) * x[j];
    x[i] = s / lu_.at(i, i);
  }
  return x;
}

std::vector<Rational> solve_square(const DenseMatrix& M, const std::vector<Rational>& b) {
  LuFactors lu(M);
  return lu.solve(b);
}

DenseMatrix gram_complement(const DenseMatrix& A, const DenseMatrix& B, const DenseMatrix& G) {
  // C = B * ker(A' G B): every column of C is G-orthogonal to span(A).
  DenseMatrix AtG = A.transposed() * G;
  DenseMatrix S = AtG * B;
  DenseMatrix K = nullspace(from_dense(S));
  return B * K;
}

bool spd_check(const DenseMatrix& G) {
  if (G.rows != G.cols) return false;
  for (long i = 0; i < G.rows; ++i)
    for (long j = i + 1; j < G.cols; ++j)
      if (G.at(i, j) != G.at(j, i)) return false;
  DenseMatrix W = G;
  for (long k = 0; k < W.rows; ++k) {
    if (sgn(W.at(k, k)) <= 0) return false;
    const Rational inv = 1 / W.at(k, k);
    for (long i = k + 1; i < W.rows; ++i) {
      if (W.at(i, k) == 0) continue;
      Rational f = W.at(i, k) * inv;
      for (long j = k + 1; j < W.cols; ++j)
        if (W.at(k, j) != 0) W.at(i, j) -= f * W.at(k, j);
    }
  }
  return true;
}

}  // namespace wfela
