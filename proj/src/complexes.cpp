#include "wfela/complexes.hpp"

#include <algorithm>
#include <stdexcept>

namespace wfela {

// ---------------------------------------------------------------------------
// Nodes

Node node_of(const FESpace& s, const std::string& label) {
  Node n;
  n.label = label.empty() ? s.desc.name + "_" + std::to_string(s.desc.r) : label;
  n.ambient = s.layout.size();
  if (!s.image_form && s.constraints.rows == 0) {
    n.free_form = true;
    return n;
  }
  n.basis = s.basis;
  if (!s.image_form) {
    n.constraints = s.constraints;
    n.has_constraints = true;
  }
  return n;
}

Node direct_sum(const std::string& label, const Node& a, const Node& b) {
  if (a.factored || b.factored) throw std::invalid_argument("direct_sum: factored nodes unsupported");
  Node n;
  n.label = label;
  n.ambient = a.ambient + b.ambient;
  DenseMatrix ba = a.free_form ? DenseMatrix::identity(a.ambient) : a.basis;
  DenseMatrix bb = b.free_form ? DenseMatrix::identity(b.ambient) : b.basis;
  n.basis = DenseMatrix(n.ambient, ba.cols + bb.cols);
  for (long j = 0; j < ba.cols; ++j)
    for (long i = 0; i < ba.rows; ++i) n.basis.at(i, j) = ba.at(i, j);
  for (long j = 0; j < bb.cols; ++j)
    for (long i = 0; i < bb.rows; ++i) n.basis.at(a.ambient + i, ba.cols + j) = bb.at(i, j);
  if ((a.has_constraints || a.free_form) && (b.has_constraints || b.free_form)) {
    SparseMatrix C(0, n.ambient);
    if (a.has_constraints)
      for (const auto& row : a.constraints.row) C.append_row(row);
    if (b.has_constraints)
      for (const auto& row : b.constraints.row) {
        auto r = row;
        for (auto& e : r) e.first += a.ambient;
        C.append_row(std::move(r));
      }
    C.cols = n.ambient;
    n.constraints = std::move(C);
    n.has_constraints = true;
  }
  return n;
}

namespace {

SparseMatrix tensor_cols_vec(const SparseMatrix& m) {
  // scalar-ambient x glued -> vector-ambient x (3 glued)
  SparseMatrix t(m.rows * 3, m.cols * 3);
  for (long i = 0; i < m.rows; ++i)
    for (const auto& [j, v] : m.row[i])
      for (int k = 0; k < 3; ++k) t.add(i * 3 + k, 3 * j + k, v);
  return t;
}

SparseMatrix tensor_rows_vec(const SparseMatrix& rows) {
  // rows over scalar ambient -> 3 copies over vector ambient
  SparseMatrix t(0, rows.cols * 3);
  for (const auto& row : rows.row)
    for (int k = 0; k < 3; ++k) {
      std::vector<std::pair<long, Rational>> r;
      for (const auto& [j, v] : row) r.push_back({j * 3 + k, v});
      t.append_row(std::move(r));
    }
  t.cols = rows.cols * 3;
  return t;
}

SparseMatrix tensor_cols_mat(const SparseMatrix& m) {
  // vector-ambient x glued -> matrix-ambient x (3 glued), rows-in-X
  SparseMatrix t(m.rows * 3, m.cols * 3);
  for (long i = 0; i < m.rows; ++i) {
    long base = i / 3;
    int comp = static_cast<int>(i % 3);
    for (const auto& [j, v] : m.row[i])
      for (int rw = 0; rw < 3; ++rw) t.add(base * 9 + 3 * rw + comp, 3 * j + rw, v);
  }
  return t;
}

SparseMatrix tensor_rows_mat(const SparseMatrix& rows) {
  SparseMatrix t(0, rows.cols * 3);
  for (const auto& row : rows.row)
    for (int rw = 0; rw < 3; ++rw) {
      std::vector<std::pair<long, Rational>> r;
      for (const auto& [j, v] : row) {
        long base = j / 3;
        int comp = static_cast<int>(j % 3);
        r.push_back({base * 9 + 3 * rw + comp, v});
      }
      t.append_row(std::move(r));
    }
  t.cols = rows.cols * 3;
  return t;
}

DenseMatrix tensor_ker(const DenseMatrix& k) {
  DenseMatrix t(k.rows * 3, k.cols * 3);
  for (long i = 0; i < k.rows; ++i)
    for (long j = 0; j < k.cols; ++j)
      if (k.at(i, j) != 0)
        for (int c = 0; c < 3; ++c) t.at(3 * i + c, 3 * j + c) = k.at(i, j);
  return t;
}

SparseMatrix tensor_glue(const SparseMatrix& g) {
  SparseMatrix t(0, g.cols * 3);
  for (const auto& row : g.row)
    for (int c = 0; c < 3; ++c) {
      std::vector<std::pair<long, Rational>> r;
      for (const auto& [j, v] : row) r.push_back({3 * j + c, v});
      t.append_row(std::move(r));
    }
  t.cols = g.cols * 3;
  return t;
}

}  // namespace

Node node_tensor_vector(const std::string& label, const Node& scalar) {
  Node n;
  n.label = label;
  n.ambient = scalar.ambient * 3;
  if (scalar.free_form) {
    n.free_form = true;
    return n;
  }
  if (scalar.factored) {
    n.factored = true;
    n.loc = tensor_cols_vec(scalar.loc);
    n.ker = tensor_ker(scalar.ker);
    n.glue = tensor_glue(scalar.glue);
    if (scalar.has_constraints) {
      n.constraints = tensor_rows_vec(scalar.constraints);
      n.has_constraints = true;
    }
    return n;
  }
  // Plain: expand the basis columns.
  n.basis = DenseMatrix(n.ambient, scalar.basis.cols * 3);
  for (long j = 0; j < scalar.basis.cols; ++j)
    for (long i = 0; i < scalar.basis.rows; ++i)
      if (scalar.basis.at(i, j) != 0)
        for (int k = 0; k < 3; ++k) n.basis.at(3 * i + k, 3 * j + k) = scalar.basis.at(i, j);
  if (scalar.has_constraints) {
    n.constraints = tensor_rows_vec(scalar.constraints);
    n.has_constraints = true;
  }
  return n;
}

Node node_tensor_matrix(const std::string& label, const Node& vec) {
  Node n;
  n.label = label;
  n.ambient = vec.ambient * 3;
  if (vec.free_form) {
    n.free_form = true;
    return n;
  }
  if (vec.factored) {
    n.factored = true;
    n.loc = tensor_cols_mat(vec.loc);
    n.ker = tensor_ker(vec.ker);
    n.glue = tensor_glue(vec.glue);
    if (vec.has_constraints) {
      n.constraints = tensor_rows_mat(vec.constraints);
      n.has_constraints = true;
    }
    return n;
  }
  n.basis = DenseMatrix(n.ambient, vec.basis.cols * 3);
  for (long j = 0; j < vec.basis.cols; ++j)
    for (long i = 0; i < vec.basis.rows; ++i)
      if (vec.basis.at(i, j) != 0) {
        long base = i / 3;
        int comp = static_cast<int>(i % 3);
        for (int rw = 0; rw < 3; ++rw)
          n.basis.at(base * 9 + 3 * rw + comp, 3 * j + rw) = vec.basis.at(i, j);
      }
  if (vec.has_constraints) {
    n.constraints = tensor_rows_mat(vec.constraints);
    n.has_constraints = true;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Restricted rank

namespace {

/// Modular rank of (S * K) for sparse S and dense K, two independent primes.
/// Rows are sketched (rank lower bound; validated by the surrounding
/// exactness equalities) when the product is much taller than wide.
long factored_rank(const SparseMatrix& S, const DenseMatrix& K) {
  if (K.cols == 0) return 0;
  std::uint64_t seed = prime_seed() ^ 0xfac707edULL;
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto primes = random_primes(2, seed + attempt);
    long results[2] = {-1, -2};
    bool ok = true;
    for (int pi = 0; pi < 2 && ok; ++pi) {
      Mod64 m{primes[pi]};
      // Reduce K.
      std::vector<std::uint64_t> Km(static_cast<size_t>(K.rows) * K.cols);
      for (long i = 0; i < K.rows && ok; ++i)
        for (long j = 0; j < K.cols; ++j) {
          if (K.at(i, j) == 0) {
            Km[static_cast<size_t>(i) * K.cols + j] = 0;
            continue;
          }
          std::uint64_t v;
          if (!reduce_mod(K.at(i, j), m, v)) {
            ok = false;
            break;
          }
          Km[static_cast<size_t>(i) * K.cols + j] = v;
        }
      if (!ok) break;
      const bool sketch = S.rows > 4 * K.cols + 64;
      const long out_rows = sketch ? K.cols + 48 : S.rows;
      ModMatrix D(m, out_rows, K.cols);
      Rng mix(seed + 77 * attempt + pi);
      std::vector<std::uint64_t> rowmul(S.rows);
      std::vector<long> rowdst(S.rows);
      for (long i = 0; i < S.rows; ++i) {
        rowmul[i] = 1 + mix.next() % (m.p - 1);
        rowdst[i] = static_cast<long>(mix.below(static_cast<std::uint64_t>(out_rows)));
      }
      for (long i = 0; i < S.rows && ok; ++i) {
        if (S.row[i].empty()) continue;
        long dst = sketch ? rowdst[i] : i;
        std::uint64_t mulf = sketch ? rowmul[i] : 1;
        for (const auto& [c, v] : S.row[i]) {
          std::uint64_t sv;
          if (!reduce_mod(v, m, sv)) {
            ok = false;
            break;
          }
          sv = m.mul(sv, mulf);
          if (sv == 0) continue;
          const std::uint64_t* krow = &Km[static_cast<size_t>(c) * K.cols];
          std::uint64_t* drow = &D.at(dst, 0);
          for (long j = 0; j < K.cols; ++j)
            if (krow[j]) drow[j] = m.add(drow[j], m.mul(sv, krow[j]));
        }
      }
      if (!ok) break;
      results[pi] = modular_rank(D);
    }
    if (!ok) continue;
    if (results[0] == results[1]) return results[0];
  }
  throw std::runtime_error("factored_rank: modular computation failed to stabilize");
}

}  // namespace

long image_rank(const SparseMatrix& M, const Node& X, RankMode mode) {
  if (X.free_form) return rank_of(M, mode).rank;
  if (X.factored) return factored_rank(M * X.loc, X.ker);
  if (mode == RankMode::Modular ||
      (mode == RankMode::Auto && (M.rows > kAutoExactLimit || X.basis.cols > kAutoExactLimit)))
    return factored_rank(M, X.basis);
  return rank_of(from_dense(M * X.basis), mode).rank;
}

// ---------------------------------------------------------------------------
// Exactness engine

bool ExactnessReport::pass() const {
  bool ok = complex_pass && membership_pass && head_pass && (!tail_checked || tail_pass);
  for (const auto& s : slots) ok = ok && s.pass;
  return ok;
}

namespace {

bool node_membership_zero(const Node& X, const SparseMatrix& rowsM, RankMode mode) {
  // rowsM applied to the span of X vanishes?
  if (X.free_form) return is_zero(rowsM);
  if (X.factored) {
    SparseMatrix C = rowsM * X.loc;
    if (is_zero(C)) return true;
    SparseMatrix st = vstack(X.glue, C);
    return rank_of(st, RankMode::Auto).rank == rank_of(X.glue, RankMode::Auto).rank;
  }
  return is_zero(rowsM * X.basis);
}

}  // namespace

ExactnessReport check_exact(const ComplexSpec& cs, RankMode mode) {
  ExactnessReport rep;
  rep.name = cs.name;
  rep.r = cs.r;
  const size_t n = cs.spaces.size();
  bool modular_used = false;
  for (const auto& sp : cs.spaces) modular_used = modular_used || sp.factored || sp.ambient > kAutoExactLimit;

  std::vector<long> rk(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) rk[k] = image_rank(cs.maps[k], cs.spaces[k], mode);

  // Complex property: consecutive composites annihilate the space.
  for (size_t k = 0; k + 2 < n; ++k) {
    SparseMatrix Z = cs.maps[k + 1] * cs.maps[k];
    if (is_zero(Z)) continue;
    rep.complex_pass = rep.complex_pass && node_membership_zero(cs.spaces[k], Z, mode);
  }

  // Membership of each image in the next space.
  for (size_t k = 0; k + 1 < n; ++k) {
    const Node& tgt = cs.spaces[k + 1];
    bool ok = true;
    if (k < cs.membership_rows.size() && cs.membership_rows[k]) {
      // Certificate rows are given over the source ambient already.
      ok = node_membership_zero(cs.spaces[k], *cs.membership_rows[k], mode);
    } else if (tgt.free_form) {
      ok = true;
    } else if (tgt.has_constraints) {
      ok = node_membership_zero(cs.spaces[k], tgt.constraints * cs.maps[k], mode);
    } else if (!cs.spaces[k].factored && !tgt.factored) {
      DenseMatrix W = cs.maps[k] * (cs.spaces[k].free_form ? DenseMatrix::identity(cs.spaces[k].ambient)
                                                           : cs.spaces[k].basis);
      long rkh = rank_of(from_dense(hcat(tgt.basis, W)), mode).rank;
      ok = (rkh == tgt.dim());
    } else {
      throw std::logic_error("check_exact: no membership route for " + tgt.label);
    }
    rep.membership_pass = rep.membership_pass && ok;
  }

  // Head.
  rep.head_expected = cs.head_expected;
  rep.head_dim = cs.spaces[0].dim() - rk[0];
  rep.head_pass = (rep.head_dim == cs.head_expected);
  if (cs.head_fields.cols > 0) {
    bool ok = true;
    if (cs.spaces[0].has_constraints) ok = is_zero(cs.spaces[0].constraints * cs.head_fields);
    ok = ok && is_zero(cs.maps[0] * cs.head_fields);
    long rraug = rank_of(from_dense(cs.head_fields), RankMode::Auto).rank;
    ok = ok && (rraug == cs.head_expected);
    rep.head_pass = rep.head_pass && ok;
  }

  // Interior slots.
  for (size_t k = 1; k + 1 < n; ++k) {
    SlotReport s;
    s.at = cs.spaces[k].label;
    s.in_rank = rk[k - 1];
    s.out_kernel = cs.spaces[k].dim() - rk[k];
    s.pass = (s.in_rank == s.out_kernel);
    rep.slots.push_back(s);
  }

  // Tail.
  if (cs.tail_surjective) {
    rep.tail_checked = true;
    rep.tail_rank = rk[n - 2];
    rep.tail_expected = cs.spaces[n - 1].dim();
    rep.tail_pass = (rep.tail_rank == rep.tail_expected);
  }
  rep.mode = modular_used ? "modular" : "exact";
  return rep;
}

bool check_complex(const ComplexSpec& cs) {
  for (size_t k = 0; k + 2 < cs.spaces.size(); ++k) {
    SparseMatrix Z = cs.maps[k + 1] * cs.maps[k];
    if (!is_zero(Z) && !node_membership_zero(cs.spaces[k], Z, RankMode::Auto)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Local sequence catalog

std::vector<std::string> sequence_names() {
  return {"alfseq1",      "alfseq2",      "2dbdryseq1",   "2dbdryseq2",  "altalfseq1",    "altalfseq2",
          "alt2dbdryseq1", "alt2dbdryseq2", "gradcurlsven", "2dpreelasvenb", "2dpreelaairy", "elaseqsvenb",
          "elaseqairy",   "seq0",         "seq0b",        "seq1",        "seq1b",         "seq2",
          "seq2b",        "preseq",       "preseqb",      "elseq",       "elseqb",        "globalseq1",
          "globalseq2",   "globalpreseq", "globalelseq"};
}

int sequence_min_r(const std::string& name) {
  if (name == "2dpreelasvenb" || name == "2dpreelaairy") return 2;
  if (name.substr(0, 3) == "alf" || name.substr(0, 3) == "alt" || name.substr(0, 2) == "2d" ||
      name == "gradcurlsven")
    return 1;
  return 3;
}

bool sequence_is_global(const std::string& name) { return name.substr(0, 6) == "global"; }

namespace {

/// Constant scalar 1 over a layout as a basis column matrix.
DenseMatrix constant_field_cols(const FieldLayout& l) {
  DenseMatrix m(l.size(), 1);
  PiecewiseField one = field_from_polys(l, {Poly::constant(Rational(1))});
  m.set_col(0, one.coef);
  return m;
}

DenseMatrix rigid_cols(const FieldLayout& l) {
  auto r = rigid_fields(l);
  DenseMatrix m(l.size(), static_cast<long>(r.size()));
  for (size_t k = 0; k < r.size(); ++k) m.set_col(static_cast<long>(k), r[k].coef);
  return m;
}

}  // namespace

ComplexSpec build_sequence(SpaceCache& cache, const std::string& name, int r) {
  const SplitComplex& sc = cache.sc();
  ComplexSpec cs;
  cs.name = name;
  cs.r = r;
  const int face = 0;

  auto fspace = [&](const std::string& n, int deg) -> const FESpace& { return cache.face_space(n, deg, face); };
  auto tspace = [&](const std::string& n, int deg) -> const FESpace& { return cache.tet_space(n, deg); };
  auto flay = [&](int deg, int nc) { return face_layout(sc, face, deg, nc); };
  auto vlay = [&](int deg, int nc) { return volume_layout(sc, deg, nc); };

  auto deRham2d = [&](const char* s0, const char* s1, const char* s2, bool rot, long head) {
    cs.spaces = {node_of(fspace(s0, r)), node_of(fspace(s1, r - 1)), node_of(fspace(s2, r - 2))};
    if (rot) {
      cs.maps = {op_rotF_scalar(flay(r, 1)).m, op_divF_vec(flay(r - 1, 3)).m};
    } else {
      cs.maps = {op_gradF_scalar(flay(r, 1)).m, op_curlF_vec(flay(r - 1, 3)).m};
    }
    cs.head_expected = head;
    cs.tail_surjective = true;
    if (head == 1) cs.head_fields = constant_field_cols(flay(r, 1));
  };

  if (name == "alfseq1") {
    deRham2d("L0", "V1curl", "V2", false, 1);
  } else if (name == "alfseq2") {
    deRham2d("S0", "L1", "V2", false, 1);
  } else if (name == "2dbdryseq1") {
    deRham2d("L0r", "V1curlr", "V2r", false, 0);
  } else if (name == "2dbdryseq2") {
    deRham2d("S0r", "L1r", "V2r", false, 0);
  } else if (name == "altalfseq1") {
    deRham2d("L0", "V1div", "V2", true, 1);
  } else if (name == "altalfseq2") {
    deRham2d("S0", "L1", "V2", true, 1);
  } else if (name == "alt2dbdryseq1") {
    deRham2d("L0r", "V1divr", "V2r", true, 0);
  } else if (name == "alt2dbdryseq2") {
    deRham2d("S0r", "L1r", "V2r", true, 0);
  } else if (name == "gradcurlsven") {
    cs.spaces = {node_of(face_tensor_tangent("S0rV2", fspace("S0r", r)), "S0r(x)V2"),
                 node_of(fspace("Qinc1r", r - 1)), node_of(fspace("VcurlV2r", r - 2))};
    cs.maps = {op_gradF_vec(flay(r, 3)).m, op_curlF_mat(flay(r - 1, 9)).m};
    cs.head_expected = 0;
    cs.tail_surjective = true;
  } else if (name == "2dpreelasvenb") {
    Node a0 = node_of(face_tensor_tangent("S0rV2", fspace("S0r", r + 1)), "S0r(x)V2");
    Node b0 = node_of(fspace("L0r", r));
    cs.spaces = {direct_sum("head", a0, b0), node_of(fspace("Qinc1r", r)), node_of(fspace("V2", r - 2))};
    SparseMatrix first = hstack(op_gradF_vec(flay(r + 1, 3)).m, op_skew_scalar(flay(r, 1)).m);
    cs.maps = {first, op_incF(flay(r, 9)).m};
    // Tail functionals [int x-perp ; int]: realized as a 4-row map into an
    // abstract 4-dimensional slot (rank 3).
    FieldLayout v2l = flay(r - 2, 1);
    std::vector<PiecewiseField> xperp;  // (Q(x-m) x n)_i * u
    {
      const Frame& fr = sc.faces[face].frame;
      const Vec3 m = sc.points[sc.faces[face].m_point];
      std::array<Poly, 3> qx;
      Poly ndot = Poly::constant(Rational(0));
      for (int b = 0; b < 3; ++b) ndot = ndot + fr.n[b] * (Poly::var(b) - Poly::constant(m[b]));
      for (int a = 0; a < 3; ++a)
        qx[a] = (Poly::var(a) - Poly::constant(m[a])) - (fr.n[a] / fr.nn) * ndot;
      std::array<Poly, 3> xp;
      xp[0] = fr.n[2] * qx[1] - fr.n[1] * qx[2];
      xp[1] = fr.n[0] * qx[2] - fr.n[2] * qx[0];
      xp[2] = fr.n[1] * qx[0] - fr.n[0] * qx[1];
      for (int a = 0; a < 3; ++a) xperp.push_back(field_from_polys(flay(1, 1), {xp[a]}));
      xperp.push_back(field_from_polys(flay(0, 1), {Poly::constant(Rational(1))}));
    }
    SparseMatrix tail = moment_rows(v2l, xperp);
    cs.maps.push_back(tail);
    Node tailnode;
    tailnode.label = "[V2;R]";
    tailnode.ambient = 4;
    tailnode.free_form = true;
    cs.spaces.push_back(tailnode);
    cs.head_expected = 0;
  } else if (name == "2dpreelaairy") {
    // Head [R; V2] -> S0_{r+1} -> V1div (x) V2 -> [V2_{r-1}; V2_{r-2} (x) V2].
    Node head;
    head.label = "[R;V2]";
    head.ambient = 3;
    head.free_form = true;
    const FESpace& s0 = fspace("S0", r + 1);
    Node mid = node_of(face_tensor_tangent_matrix("V1divV2", fspace("V1div", r - 1)), "V1div(x)V2");
    Node tail = direct_sum("[V2;V2(x)V2]", node_of(fspace("V2", r - 1)),
                           node_of(face_tensor_tangent("V2V2", fspace("V2", r - 2)), "V2(x)V2"));
    cs.spaces = {head, node_of(s0), mid, tail};
    // Head arrow: columns 1, x-perp . b1, x-perp . b2 expanded at degree r+1.
    {
      const Frame& fr = sc.faces[face].frame;
      const Vec3 m = sc.points[sc.faces[face].m_point];
      std::array<Poly, 3> qx;
      Poly ndot = Poly::constant(Rational(0));
      for (int b = 0; b < 3; ++b) ndot = ndot + fr.n[b] * (Poly::var(b) - Poly::constant(m[b]));
      for (int a = 0; a < 3; ++a)
        qx[a] = (Poly::var(a) - Poly::constant(m[a])) - (fr.n[a] / fr.nn) * ndot;
      std::array<Poly, 3> xp;
      xp[0] = fr.n[2] * qx[1] - fr.n[1] * qx[2];
      xp[1] = fr.n[0] * qx[2] - fr.n[2] * qx[0];
      xp[2] = fr.n[1] * qx[0] - fr.n[0] * qx[1];
      FieldLayout sl = flay(r + 1, 1);
      SparseMatrix h(sl.size(), 3);
      PiecewiseField one = field_from_polys(sl, {Poly::constant(Rational(1))});
      for (long i = 0; i < sl.size(); ++i) h.add(i, 0, one.coef[i]);
      int col = 1;
      for (const Vec3& b : {fr.b1, fr.b2}) {
        Poly p = b[0] * xp[0] + b[1] * xp[1];
        p = p + b[2] * xp[2];
        PiecewiseField f = field_from_polys(sl, {p});
        for (long i = 0; i < sl.size(); ++i) h.add(i, col, f.coef[i]);
        ++col;
      }
      cs.maps.push_back(h);
    }
    cs.maps.push_back(op_airyF(flay(r + 1, 1)).m);
    SparseMatrix last = op_skew_mat(flay(r - 1, 9)).m;
    SparseMatrix lastd = op_divF_mat(flay(r - 1, 9)).m;
    cs.maps.push_back(vstack(last, lastd));
    cs.head_expected = 0;
  } else if (name == "elaseqsvenb") {
    cs.spaces = {node_of(face_tensor_tangent("S0rV2", fspace("S0r", r + 1)), "S0r(x)V2"),
                 node_of(fspace("Qinc1sr", r)), node_of(fspace("Q2r", r - 2))};
    cs.maps = {op_epsF(flay(r + 1, 3)).m, op_incF(flay(r, 9)).m};
    cs.head_expected = 0;
    cs.tail_surjective = true;
  } else if (name == "elaseqairy") {
    cs.spaces = {node_of(fspace("S0", r)), node_of(fspace("Q1", r - 2)),
                 node_of(face_tensor_tangent("V2V2", fspace("V2", r - 3)), "V2(x)V2")};
    cs.maps = {op_airyF(flay(r, 1)).m, op_divF_mat(flay(r - 2, 9)).m};
    cs.head_expected = 3;
    {
      auto p1 = face_p1_fields(flay(r, 1));
      cs.head_fields = DenseMatrix(flay(r, 1).size(), 3);
      for (int k = 0; k < 3; ++k) cs.head_fields.set_col(k, p1[k].coef);
    }
    cs.tail_surjective = true;
  } else if (name == "seq0" || name == "seq0b" || name == "seq1" || name == "seq1b" || name == "seq2" ||
             name == "seq2b") {
    bool ring = name.back() == 'b';
    std::string base = name.substr(0, 4);
    const char *s0, *s1, *s2, *s3;
    if (base == "seq0") {
      s0 = ring ? "L0r" : "L0";
      s1 = ring ? "V1r" : "V1";
      s2 = ring ? "V2r" : "V2";
      s3 = ring ? "V3r" : "V3";
    } else if (base == "seq1") {
      s0 = ring ? "S0r" : "S0";
      s1 = ring ? "L1r" : "L1";
      s2 = ring ? "cV2r" : "V2";
      s3 = ring ? "V3r" : "V3";
    } else {
      s0 = ring ? "S0r" : "S0";
      s1 = ring ? "S1r" : "S1";
      s2 = ring ? "L1r" : "L1";
      s3 = ring ? "cV3r" : "V3";
    }
    cs.spaces = {node_of(tspace(s0, r)), node_of(tspace(s1, r - 1)), node_of(tspace(s2, r - 2)),
                 node_of(tspace(s3, r - 3))};
    cs.maps = {op_grad_scalar(vlay(r, 1)).m, op_curl_vec(vlay(r - 1, 3)).m, op_div_vec(vlay(r - 2, 3)).m};
    cs.head_expected = ring ? 0 : 1;
    if (!ring) cs.head_fields = constant_field_cols(vlay(r, 1));
    cs.tail_surjective = true;
  } else if (name == "preseq" || name == "preseqb") {
    bool ring = name.back() == 'b';
    auto tv = [&](const std::string& nm, int deg) {
      return node_of(tensor_to_vector(nm + "v", tspace(nm, deg)), nm + "(x)V_" + std::to_string(deg));
    };
    auto tm = [&](const std::string& nm, int deg) {
      return node_of(tensor_to_matrix(nm + "m", tspace(nm, deg)), nm + "(x)V_" + std::to_string(deg));
    };
    Node a0 = tv(ring ? "S0r" : "S0", r + 1);
    Node b0 = tv(ring ? "S0r" : "S0", r);
    Node mid = tm(ring ? "S1r" : "S1", r);
    Node v2 = tm(ring ? "cV2r" : "V2", r - 2);
    Node t1, t2;
    if (ring) {
      t1 = node_of(tensor_to_vector("cV3v", tspace("cV3", r - 2)), "cV3(x)V");
      t2 = node_of(tensor_to_vector("V3rv", tspace("V3r", r - 3)), "V3r(x)V");
    } else {
      t1.label = "V3(x)V";
      t1.ambient = vlay(r - 2, 3).size();
      t1.free_form = true;
      t2.label = "V3(x)V";
      t2.ambient = vlay(r - 3, 3).size();
      t2.free_form = true;
    }
    cs.spaces = {direct_sum("[S0;S0]", a0, b0), mid, v2, direct_sum("[V3;V3]", t1, t2)};
    LinearMap grad = op_grad_vec(vlay(r + 1, 3));
    LinearMap mskw = value_op(vlay(r, 3), 9, vmap_mskw());
    cs.maps.push_back(hstack(grad.m, scale(-1, mskw.m)));
    LinearMap c1 = op_curl_mat(vlay(r, 9));
    LinearMap xi = value_op(vlay(r - 1, 9), 9, vmap_xi_inv());
    LinearMap c2 = op_curl_mat(vlay(r - 1, 9));
    cs.maps.push_back(c2.m * (xi.m * c1.m));
    LinearMap vs = value_op(vlay(r - 2, 9), 3, vmap_vskw());
    LinearMap dv = op_div_mat(vlay(r - 2, 9));
    cs.maps.push_back(vstack(scale(2, vs.m), dv.m));
    cs.head_expected = ring ? 0 : 6;
    if (!ring) {
      // Kernel representatives (a + b x x, b).
      FieldLayout la = vlay(r + 1, 3), lb = vlay(r, 3);
      cs.head_fields = DenseMatrix(la.size() + lb.size(), 6);
      auto rig = rigid_fields(la);
      for (int k = 0; k < 6; ++k)
        for (long i = 0; i < la.size(); ++i) cs.head_fields.at(i, k) = rig[k].coef[i];
      for (int k = 3; k < 6; ++k) {
        std::vector<Poly> c(3, Poly::constant(Rational(0)));
        c[k - 3] = Poly::constant(Rational(1));
        PiecewiseField z = field_from_polys(lb, c);
        for (long i = 0; i < lb.size(); ++i) cs.head_fields.at(la.size() + i, k) = z.coef[i];
      }
    }
    cs.tail_surjective = !ring;
  } else if (name == "elseq" || name == "elseqb") {
    bool ring = name.back() == 'b';
    const char* suf = ring ? "r" : "";
    cs.spaces = {node_of(tspace(std::string("U0") + suf, r + 1)), node_of(tspace(std::string("U1") + suf, r)),
                 node_of(tspace(std::string("U2") + suf, r - 2)),
                 node_of(tspace(std::string("U3") + suf, r - 3))};
    cs.maps = {op_eps(vlay(r + 1, 3)).m, op_inc(vlay(r, 9)).m, op_div_mat(vlay(r - 2, 9)).m};
    cs.head_expected = ring ? 0 : 6;
    if (!ring) cs.head_fields = rigid_cols(vlay(r + 1, 3));
    cs.tail_surjective = true;
  } else {
    throw std::invalid_argument("unknown sequence '" + name + "'");
  }
  cs.membership_rows.resize(cs.maps.size());
  return cs;
}

ExactnessReport catalog_run(SpaceCache& cache, const std::string& name, int r, RankMode mode) {
  if (sequence_is_global(name)) {
    GlobalSpaces gs(cache);
    return check_exact(build_global_sequence(gs, name, r), mode);
  }
  return check_exact(build_sequence(cache, name, r), mode);
}

// ---------------------------------------------------------------------------
// Global spaces

GlobalSpaces::GlobalSpaces(SpaceCache& cache) : cache_(&cache) {}

namespace {

SparseMatrix macro_face_jump_rows(const FieldLayout& l, const std::function<DenseMatrix(const MacroFace&)>& L) {
  const SplitComplex& sc = *l.sc;
  SparseMatrix R(0, l.size());
  for (const auto& mf : sc.faces) {
    if (!mf.interior()) continue;
    DenseMatrix V = L(mf);
    for (int t = 0; t < 3; ++t) {
      int c0 = mf.tris[t].cell[0], c1 = mf.tris[t].cell[1];
      std::vector<long> sub(mf.tris[t].pts.begin(), mf.tris[t].pts.end());
      auto pa = trace_pairs(l.degree, l.cells[c0].pts, sub);
      auto pb = trace_pairs(l.degree, l.cells[c1].pts, sub);
      for (size_t k = 0; k < pa.size(); ++k) {
        for (long o = 0; o < V.rows; ++o) {
          std::vector<std::pair<long, Rational>> row;
          for (int c = 0; c < l.ncomp; ++c) {
            if (V.at(o, c) == 0) continue;
            row.push_back({l.index(c0, pa[k].second, c), V.at(o, c)});
            row.push_back({l.index(c1, pb[k].second, c), -V.at(o, c)});
          }
          R.append_row(std::move(row));
        }
      }
    }
  }
  R.cols = l.size();
  return R;
}

}  // namespace

const Node& GlobalSpaces::node(const std::string& name, int degree) {
  std::string key = name + "|" + std::to_string(degree);
  auto it = cache_nodes_.find(key);
  if (it == cache_nodes_.end()) it = cache_nodes_.emplace(key, build(name, degree)).first;
  return it->second;
}

Node GlobalSpaces::build(const std::string& name, int degree) {
  SpaceCache& cache = *cache_;
  const SplitComplex& sc = cache.sc();
  const int ntets = static_cast<int>(sc.macro.tets.size());

  if (name == "gV3" || name == "gU3") {
    Node n;
    n.label = name + "_" + std::to_string(degree);
    n.ambient = volume_layout(sc, std::max(degree, 0), name == "gU3" ? 3 : 1).size();
    n.free_form = true;
    if (degree < 0) {
      n.free_form = false;
      n.basis = DenseMatrix(n.ambient, 0);
    }
    return n;
  }

  std::string local;
  int nc = 1;
  if (name == "gS0") {
    local = "S0";
    nc = 1;
  } else if (name == "gL0") {
    local = "L0";
    nc = 1;
  } else if (name == "gS1") {
    local = "S1";
    nc = 3;
  } else if (name == "gV2s") {
    local = "V2";
    nc = 3;
  } else if (name == "gV3s") {
    local = "V3";
    nc = 1;
  } else if (name == "gU2") {
    local = "U2";
    nc = 9;
  } else {
    throw std::invalid_argument("unknown global space '" + name + "'");
  }

  FieldLayout gl = volume_layout(sc, std::max(degree, 0), nc);
  Node n;
  n.label = name + "_" + std::to_string(degree);
  n.ambient = gl.size();
  n.factored = true;

  if (degree < 0) {
    n.factored = false;
    n.basis = DenseMatrix(n.ambient, 0);
    n.constraints = from_dense(DenseMatrix::identity(n.ambient));
    n.has_constraints = true;
    return n;
  }

  // Block-diagonal local bases and constraints.
  long glued = 0;
  std::vector<long> col_ofs(ntets);
  for (int t = 0; t < ntets; ++t) {
    col_ofs[t] = glued;
    glued += cache.tet_space(local, degree, t).dim;
  }
  SparseMatrix loc(gl.size(), glued);
  SparseMatrix local_rows(0, gl.size());
  for (int t = 0; t < ntets; ++t) {
    const FESpace& ls = cache.tet_space(local, degree, t);
    const long ofs = cache.tet_offset(t, gl);
    for (long i = 0; i < ls.basis.rows; ++i)
      for (long j = 0; j < ls.basis.cols; ++j)
        if (ls.basis.at(i, j) != 0) loc.add(ofs + i, col_ofs[t] + j, ls.basis.at(i, j));
    for (const auto& row : ls.constraints.row) {
      std::vector<std::pair<long, Rational>> rr;
      for (const auto& [j, v] : row) rr.push_back({ofs + j, v});
      local_rows.append_row(std::move(rr));
    }
  }
  local_rows.cols = gl.size();

  // Glue rows on the global ambient.
  SparseMatrix grows(0, gl.size());
  auto glue_append = [&](SparseMatrix m) { grows = vstack(grows, m); };
  if (name == "gS0") {
    glue_append(macro_face_jump_rows(gl, [](const MacroFace&) { return DenseMatrix::identity(1); }));
    LinearMap g = op_grad_scalar(gl);
    glue_append(macro_face_jump_rows(g.dst, [](const MacroFace&) { return DenseMatrix::identity(3); }) * g.m);
  } else if (name == "gL0") {
    glue_append(macro_face_jump_rows(gl, [](const MacroFace&) { return DenseMatrix::identity(1); }));
  } else if (name == "gS1") {
    glue_append(macro_face_jump_rows(gl, [](const MacroFace&) { return DenseMatrix::identity(3); }));
    LinearMap c = op_curl_vec(gl);
    glue_append(macro_face_jump_rows(c.dst, [](const MacroFace&) { return DenseMatrix::identity(3); }) * c.m);
  } else if (name == "gV2s") {
    glue_append(macro_face_jump_rows(gl, [](const MacroFace& mf) { return vmap_dot(mf.frame.n); }));
    glue_append(theta_rows(gl, sc.global_ct_edge_set(),
                           [&](const CtEdge& e) { return vmap_dot(e.t_raw); }));
  } else if (name == "gV3s") {
    glue_append(theta_rows(gl, sc.global_ct_edge_set(), [](const CtEdge&) { return DenseMatrix::identity(1); }));
  } else if (name == "gU2") {
    glue_append(macro_face_jump_rows(gl, [](const MacroFace& mf) { return vmap_mat_vec(mf.frame.n); }));
    glue_append(theta_rows(gl, sc.global_ct_edge_set(),
                           [&](const CtEdge& e) { return vmap_mat_vec(e.t_raw); }));
  }
  grows.cols = gl.size();

  n.loc = std::move(loc);
  n.glue = grows * n.loc;
  n.ker = nullspace(n.glue);
  n.constraints = vstack(local_rows, grows);
  n.has_constraints = true;
  return n;
}

ComplexSpec build_global_sequence(GlobalSpaces& gs, const std::string& name, int r) {
  SpaceCache& cache = gs.cache();
  const SplitComplex& sc = cache.sc();
  ComplexSpec cs;
  cs.name = name;
  cs.r = r;
  auto vlay = [&](int deg, int nc) { return volume_layout(sc, std::max(deg, 0), nc); };

  if (name == "globalseq1") {
    cs.spaces = {gs.node("gS0", r), node_tensor_vector("gL1", gs.node("gL0", r - 1)), gs.node("gV2s", r - 2),
                 gs.node("gV3", r - 3)};
    cs.maps = {op_grad_scalar(vlay(r, 1)).m, op_curl_vec(vlay(r - 1, 3)).m, op_div_vec(vlay(r - 2, 3)).m};
    cs.head_expected = 1;
    cs.head_fields = constant_field_cols(vlay(r, 1));
    cs.tail_surjective = true;
  } else if (name == "globalseq2") {
    cs.spaces = {gs.node("gS0", r), gs.node("gS1", r - 1), node_tensor_vector("gL2", gs.node("gL0", r - 2)),
                 gs.node("gV3s", r - 3)};
    cs.maps = {op_grad_scalar(vlay(r, 1)).m, op_curl_vec(vlay(r - 1, 3)).m, op_div_vec(vlay(r - 2, 3)).m};
    cs.head_expected = 1;
    cs.head_fields = constant_field_cols(vlay(r, 1));
    cs.tail_surjective = true;
  } else if (name == "globalpreseq") {
    Node a0 = node_tensor_vector("S0V", gs.node("gS0", r + 1));
    Node b0 = node_tensor_vector("S0V", gs.node("gS0", r));
    Node mid = node_tensor_matrix("S1V", gs.node("gS1", r));
    Node v2 = node_tensor_matrix("V2sV", gs.node("gV2s", r - 2));
    Node t1 = node_tensor_vector("V3sV", gs.node("gV3s", r - 2));
    Node t2;
    t2.label = "V3V";
    t2.ambient = vlay(r - 3, 3).size();
    t2.free_form = true;
    // Direct sums with factored parts are handled by separate slot checks:
    // represent the ends as stacked maps into/from plain blocks.
    // Head: [grad, -mskw] on the concatenated coefficient space.
    Node head;
    {
      // Assemble the factored direct sum explicitly.
      head.label = "[S0V;S0V]";
      head.ambient = a0.ambient + b0.ambient;
      head.factored = true;
      long ga = a0.loc.cols, gb = b0.loc.cols;
      head.loc = SparseMatrix(head.ambient, ga + gb);
      for (long i = 0; i < a0.loc.rows; ++i)
        for (const auto& [j, v] : a0.loc.row[i]) head.loc.add(i, j, v);
      for (long i = 0; i < b0.loc.rows; ++i)
        for (const auto& [j, v] : b0.loc.row[i]) head.loc.add(a0.ambient + i, ga + j, v);
      head.ker = DenseMatrix(ga + gb, a0.ker.cols + b0.ker.cols);
      for (long i = 0; i < a0.ker.rows; ++i)
        for (long j = 0; j < a0.ker.cols; ++j) head.ker.at(i, j) = a0.ker.at(i, j);
      for (long i = 0; i < b0.ker.rows; ++i)
        for (long j = 0; j < b0.ker.cols; ++j) head.ker.at(ga + i, a0.ker.cols + j) = b0.ker.at(i, j);
      head.glue = SparseMatrix(0, ga + gb);
      for (const auto& row : a0.glue.row) head.glue.append_row(row);
      for (const auto& row : b0.glue.row) {
        auto rr = row;
        for (auto& e : rr) e.first += ga;
        head.glue.append_row(std::move(rr));
      }
      head.glue.cols = ga + gb;
      head.constraints = SparseMatrix(0, head.ambient);
      for (const auto& row : a0.constraints.row) head.constraints.append_row(row);
      for (const auto& row : b0.constraints.row) {
        auto rr = row;
        for (auto& e : rr) e.first += a0.ambient;
        head.constraints.append_row(std::move(rr));
      }
      head.constraints.cols = head.ambient;
      head.has_constraints = true;
    }
    Node tail;
    {
      tail.label = "[V3sV;V3V]";
      tail.ambient = t1.ambient + t2.ambient;
      tail.factored = true;
      long g1 = t1.loc.cols;
      tail.loc = SparseMatrix(tail.ambient, g1 + t2.ambient);
      for (long i = 0; i < t1.loc.rows; ++i)
        for (const auto& [j, v] : t1.loc.row[i]) tail.loc.add(i, j, v);
      for (long i = 0; i < t2.ambient; ++i) tail.loc.add(t1.ambient + i, g1 + i, Rational(1));
      tail.ker = DenseMatrix(g1 + t2.ambient, t1.ker.cols + t2.ambient);
      for (long i = 0; i < t1.ker.rows; ++i)
        for (long j = 0; j < t1.ker.cols; ++j) tail.ker.at(i, j) = t1.ker.at(i, j);
      for (long i = 0; i < t2.ambient; ++i) tail.ker.at(g1 + i, t1.ker.cols + i) = 1;
      tail.glue = SparseMatrix(0, g1 + t2.ambient);
      for (const auto& row : t1.glue.row) tail.glue.append_row(row);
      tail.glue.cols = g1 + t2.ambient;
      tail.constraints = SparseMatrix(0, tail.ambient);
      for (const auto& row : t1.constraints.row) tail.constraints.append_row(row);
      tail.constraints.cols = tail.ambient;
      tail.has_constraints = true;
    }
    cs.spaces = {head, mid, v2, tail};
    LinearMap grad = op_grad_vec(vlay(r + 1, 3));
    LinearMap mskw = value_op(vlay(r, 3), 9, vmap_mskw());
    cs.maps.push_back(hstack(grad.m, scale(-1, mskw.m)));
    LinearMap c1 = op_curl_mat(vlay(r, 9));
    LinearMap xi = value_op(vlay(r - 1, 9), 9, vmap_xi_inv());
    LinearMap c2 = op_curl_mat(vlay(r - 1, 9));
    cs.maps.push_back(c2.m * (xi.m * c1.m));
    LinearMap vs = value_op(vlay(r - 2, 9), 3, vmap_vskw());
    LinearMap dv = op_div_mat(vlay(r - 2, 9));
    cs.maps.push_back(vstack(scale(2, vs.m), dv.m));
    cs.head_expected = 6;
    {
      FieldLayout la = vlay(r + 1, 3), lb = vlay(r, 3);
      cs.head_fields = DenseMatrix(la.size() + lb.size(), 6);
      auto rig = rigid_fields(la);
      for (int k = 0; k < 6; ++k)
        for (long i = 0; i < la.size(); ++i) cs.head_fields.at(i, k) = rig[k].coef[i];
      for (int k = 3; k < 6; ++k) {
        std::vector<Poly> c(3, Poly::constant(Rational(0)));
        c[k - 3] = Poly::constant(Rational(1));
        PiecewiseField z = field_from_polys(lb, c);
        for (long i = 0; i < lb.size(); ++i) cs.head_fields.at(la.size() + i, k) = z.coef[i];
      }
    }
    cs.tail_surjective = true;
  } else if (name == "globalelseq") {
    Node u0 = node_tensor_vector("U0g", gs.node("gS0", r + 1));
    Node s1v = node_tensor_matrix("S1Vg", gs.node("gS1", r));
    // U1 global: sym image of S1V; same factored columns pre-composed with sym.
    Node u1;
    u1.label = "U1g";
    u1.ambient = s1v.ambient;
    u1.factored = true;
    SparseMatrix sym = value_op(volume_layout(sc, r, 9), 9, vmap_sym()).m;
    u1.loc = sym * s1v.loc;
    u1.ker = s1v.ker;
    u1.glue = s1v.glue;
    u1.dim_override = image_rank(SparseMatrix::identity(u1.ambient), u1, RankMode::Modular);
    Node u2 = gs.node("gU2", r - 2);
    Node u3 = gs.node("gU3", r - 3);
    cs.spaces = {u0, u1, u2, u3};
    cs.maps = {op_eps(vlay(r + 1, 3)).m, op_inc(vlay(r, 9)).m, op_div_mat(vlay(r - 2, 9)).m};
    cs.head_expected = 6;
    cs.head_fields = rigid_cols(vlay(r + 1, 3));
    cs.tail_surjective = true;
    cs.membership_rows.resize(cs.maps.size());
    // eps(U0) lies in U1 because grad(U0) lies in S1 (x) V; certify exactly.
    cs.membership_rows[0] = s1v.constraints * op_grad_vec(vlay(r + 1, 3)).m;
    return cs;
  } else {
    throw std::invalid_argument("unknown global sequence '" + name + "'");
  }
  cs.membership_rows.resize(cs.maps.size());
  return cs;
}

// ---------------------------------------------------------------------------
// BGG

bool BggReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

BggReport derive_bgg(const BggDiagram& d) {
  BggReport rep;
  auto add = [&](const std::string& n, bool ok, const std::string& e = "0", const std::string& g = "0") {
    rep.checks.push_back({n, e, g, ok});
  };

  // Commuting squares r_{i+1} s_i = s_{i+1} t_i, exact matrix equality.
  for (int i = 0; i < 2; ++i) {
    SparseMatrix lhs = d.top_maps[i + 1] * d.connect[i];
    SparseMatrix rhs = d.connect[i + 1] * d.bottom_maps[i];
    bool ok = equal(lhs, rhs);
    add("square s" + std::to_string(i), ok);
    if (!ok) throw std::runtime_error("derive_bgg: square s" + std::to_string(i) + " does not commute");
  }
  // s1 bijective between B1 and A2: equal dimensions and full rank.
  long dimB1 = d.bottom[1].dim(), dimA2 = d.top[2].dim();
  add("s1 square", dimB1 == dimA2, std::to_string(dimA2), std::to_string(dimB1));
  long rk = image_rank(d.connect[1], d.bottom[1], RankMode::Auto);
  add("s1 full rank", rk == dimB1, std::to_string(dimB1), std::to_string(rk));
  if (dimB1 != dimA2 || rk != dimB1) throw std::runtime_error("derive_bgg: s1 is not a bijection");
  // The provided inverse really inverts s1 (ambient identity on the layout).
  SparseMatrix prod = d.s1_inverse * d.connect[1];
  add("s1_inverseveri", equal(prod, SparseMatrix::identity(prod.rows)));

  // Derived sequence.
  ComplexSpec cs;
  cs.name = d.name + ":derived";
  cs.r = d.r;
  cs.spaces = {direct_sum("[A0;B0]", d.top[0], d.bottom[0]), d.top[1], d.bottom[2],
               direct_sum("[A3;B3]", d.top[3], d.bottom[3])};
  cs.maps.push_back(hstack(d.top_maps[0], d.connect[0]));
  cs.maps.push_back(d.bottom_maps[1] * (d.s1_inverse * d.top_maps[1]));
  cs.maps.push_back(vstack(d.connect[2], d.bottom_maps[2]));
  cs.membership_rows.resize(cs.maps.size());
  rep.derived = std::move(cs);
  return rep;
}

std::vector<CheckRow> bgg_check(SpaceCache& cache, int r, bool ring, RankMode mode) {
  const SplitComplex& sc = cache.sc();
  auto vlay = [&](int deg, int nc) { return volume_layout(sc, std::max(deg, 0), nc); };
  auto tspace = [&](const std::string& n, int deg) -> const FESpace& { return cache.tet_space(n, deg); };
  auto tv = [&](const std::string& nm, int deg) {
    return node_of(tensor_to_vector(nm + "v", tspace(nm, deg)), nm + "(x)V");
  };
  auto tm = [&](const std::string& nm, int deg) {
    return node_of(tensor_to_matrix(nm + "m", tspace(nm, deg)), nm + "(x)V");
  };
  const char* S0 = ring ? "S0r" : "S0";
  const char* S1 = ring ? "S1r" : "S1";
  const char* L1 = ring ? "L1r" : "L1";
  const char* V2 = ring ? "cV2r" : "V2";

  BggDiagram d;
  d.name = ring ? "diagram(4.10)" : "diagram(4.9)";
  d.r = r;
  d.top = {tv(S0, r + 1), tm(S1, r), tm(L1, r - 1), Node{}};
  if (ring) {
    d.top[3] = node_of(tensor_to_vector("cV3v", tspace("cV3", r - 2)), "cV3(x)V");
  } else {
    d.top[3].label = "V3(x)V";
    d.top[3].ambient = vlay(r - 2, 3).size();
    d.top[3].free_form = true;
  }
  d.bottom = {tv(S0, r), tm(L1, r - 1), tm(V2, r - 2), Node{}};
  if (ring) {
    d.bottom[3] = node_of(tensor_to_vector("V3rv", tspace("V3r", r - 3)), "V3r(x)V");
  } else {
    d.bottom[3].label = "V3(x)V";
    d.bottom[3].ambient = vlay(r - 3, 3).size();
    d.bottom[3].free_form = true;
  }
  d.top_maps = {op_grad_vec(vlay(r + 1, 3)).m, op_curl_mat(vlay(r, 9)).m, op_div_mat(vlay(r - 1, 9)).m};
  d.bottom_maps = {op_grad_vec(vlay(r, 3)).m, op_curl_mat(vlay(r - 1, 9)).m, op_div_mat(vlay(r - 2, 9)).m};
  d.connect = {scale(-1, value_op(vlay(r, 3), 9, vmap_mskw()).m), value_op(vlay(r - 1, 9), 9, vmap_xi()).m,
               scale(2, value_op(vlay(r - 2, 9), 3, vmap_vskw()).m)};
  // Independent inverse route: numerically invert the 9x9 pointwise value map.
  {
    DenseMatrix X = vmap_xi();
    LuFactors lu(X);
    DenseMatrix Xinv(9, 9);
    for (int j = 0; j < 9; ++j) {
      std::vector<Rational> e(9, Rational(0));
      e[j] = 1;
      auto col = lu.solve(e);
      for (int i = 0; i < 9; ++i) Xinv.at(i, j) = col[i];
    }
    d.s1_inverse = value_op(vlay(r - 1, 9), 9, Xinv).m;
  }

  BggReport rep = derive_bgg(d);
  std::vector<CheckRow> rows = rep.checks;
  auto add = [&](const std::string& n, bool ok, const std::string& e = "", const std::string& g = "") {
    rows.push_back({n, e, g, ok});
  };

  // Surjectivity hypotheses of Proposition 2.1 (asserted for the non-ring
  // diagram, where the derived tail is claimed surjective).
  if (!ring) {
    long r2 = image_rank(d.top_maps[2], d.top[2], mode);
    add("r2 surjective", r2 == d.top[3].dim(), std::to_string(d.top[3].dim()), std::to_string(r2));
    long t2 = image_rank(d.bottom_maps[2], d.bottom[2], mode);
    add("t2 surjective", t2 == d.bottom[3].dim(), std::to_string(d.bottom[3].dim()), std::to_string(t2));
  }
  // vskw surjectivity of Lemma 4.3(3), both variants.
  {
    SparseMatrix vs = scale(2, value_op(vlay(r - 2, 9), 3, vmap_vskw()).m);
    long got = image_rank(vs, d.bottom[2], mode);
    long want = ring ? node_of(tensor_to_vector("cV3v", tspace("cV3", r - 2))).dim() : vlay(r - 2, 3).size();
    add(ring ? "vskw onto cV3(x)V" : "vskw onto V3(x)V", got == want, std::to_string(want),
        std::to_string(got));
  }
  add("t2 t1 = 0", is_zero(d.bottom_maps[2] * d.bottom_maps[1]));
  add("s2 t1 = r2 s1", equal(d.connect[2] * d.bottom_maps[1], d.top_maps[2] * d.connect[1]));

  // Derived equals the directly assembled preseq map-for-map.
  ComplexSpec direct = build_sequence(cache, ring ? "preseqb" : "preseq", r);
  bool same = true;
  for (int k = 0; k < 3; ++k) same = same && equal(rep.derived.maps[k], direct.maps[k]);
  add("derived maps = direct preseq maps", same);
  bool dims_same = true;
  for (int k = 0; k < 4; ++k) dims_same = dims_same && (rep.derived.spaces[k].dim() == direct.spaces[k].dim());
  add("derived dims = direct dims", dims_same);

  // Exactness of the derived sequence.
  rep.derived.head_expected = direct.head_expected;
  rep.derived.head_fields = direct.head_fields;
  rep.derived.tail_surjective = direct.tail_surjective;
  ExactnessReport ex = check_exact(rep.derived, mode);
  add("derived exact", ex.pass());
  return rows;
}

}  // namespace wfela
