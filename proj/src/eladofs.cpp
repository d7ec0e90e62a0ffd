#include "wfela/eladofs.hpp"

#include <algorithm>

namespace wfela {

namespace {

/// Point-evaluation rows at a macro vertex: comps (k x ncomp) selects output
/// combinations of the field value.
SparseMatrix point_rows(const FieldLayout& l, long point, const DenseMatrix& comps) {
  const SplitComplex& sc = *l.sc;
  int cell = -1;
  int local = -1;
  for (int c = 0; c < static_cast<int>(l.cells.size()) && cell < 0; ++c) {
    const auto& p = l.cells[c].pts;
    auto it = std::find(p.begin(), p.end(), point);
    if (it != p.end()) {
      cell = c;
      local = static_cast<int>(it - p.begin());
    }
  }
  if (cell < 0) throw std::invalid_argument("point_rows: point not in any cell");
  const MultiIndexSet& A = MultiIndexSet::get(l.cells[cell].dim, l.degree);
  std::vector<int> corner(l.cells[cell].dim + 1, 0);
  corner[local] = l.degree;
  long bk = A.find(corner);
  SparseMatrix R(0, l.size());
  for (long o = 0; o < comps.rows; ++o) {
    std::vector<std::pair<long, Rational>> row;
    for (int c = 0; c < l.ncomp; ++c)
      if (comps.at(o, c) != 0) row.push_back({l.index(cell, bk, c), comps.at(o, c)});
    R.append_row(std::move(row));
  }
  R.cols = l.size();
  return R;
}

/// Unit test fields of a layout (the full dual-moment family).
std::vector<PiecewiseField> unit_fields(const FieldLayout& l) {
  std::vector<PiecewiseField> out;
  for (long i = 0; i < l.size(); ++i) {
    PiecewiseField f(l);
    f.coef[i] = 1;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<PiecewiseField> basis_fields(const FESpace& s) {
  std::vector<PiecewiseField> out;
  for (long j = 0; j < s.basis.cols; ++j) {
    PiecewiseField f(s.layout);
    f.coef = s.basis.col(j);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<PiecewiseField> mapped_fields(const LinearMap& M, const std::vector<PiecewiseField>& in) {
  std::vector<PiecewiseField> out;
  for (const auto& f : in) out.push_back(apply_field(M, f));
  return out;
}

/// Independent spanning subset of image fields (certified modular pivots);
/// needed when the mapped family has a kernel, e.g. inc on the ring U1 space.
std::vector<PiecewiseField> image_basis_fields(const LinearMap& M, const FESpace& src) {
  DenseMatrix W = M.m * src.basis;
  std::vector<PiecewiseField> out;
  if (W.cols == 0) return out;
  auto piv = independent_columns(W);
  for (long j : piv) {
    PiecewiseField f(M.dst);
    f.coef = W.col(j);
    out.push_back(std::move(f));
  }
  return out;
}

/// Two rational directions spanning the plane orthogonal to d.
std::pair<Vec3, Vec3> edge_normal_pair(const Vec3& d) {
  Vec3 a(Rational(1), Rational(0), Rational(0));
  if (cross(d, a) == Vec3()) a = Vec3(Rational(0), Rational(1), Rational(0));
  Vec3 n1 = cross(d, a);
  Vec3 n2 = cross(d, n1);
  return {n1, n2};
}

DenseMatrix sym_component_selector() {
  // entries (0,0),(1,1),(2,2),(0,1),(0,2),(1,2) of a row-major 3x3 value.
  DenseMatrix C(6, 9);
  C.at(0, 0) = 1;
  C.at(1, 4) = 1;
  C.at(2, 8) = 1;
  C.at(3, 1) = 1;
  C.at(4, 2) = 1;
  C.at(5, 5) = 1;
  return C;
}

std::vector<PiecewiseField> sym_poly_edge_tests(const SplitComplex& sc, long pa, long pb, int deg) {
  // kappa = B_j S_k with the six symmetric unit matrices.
  FieldLayout el = edge_layout(sc, pa, pb, deg, 9);
  std::vector<PiecewiseField> out;
  const int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
  const MultiIndexSet& A = MultiIndexSet::get(1, deg);
  for (auto& pr : pairs) {
    for (long j = 0; j < A.size(); ++j) {
      PiecewiseField f(el);
      f.coef[el.index(0, j, 3 * pr[0] + pr[1])] = 1;
      if (pr[0] != pr[1]) f.coef[el.index(0, j, 3 * pr[1] + pr[0])] = 1;
      out.push_back(std::move(f));
    }
  }
  return out;
}

using OpFactory = std::function<LinearMap(const FieldLayout&)>;

/// rows(l) = moment_rows(OP(l).dst, tests) * OP(l).m
DofFamily moment_family(std::string tag, std::string entity, OpFactory op,
                        std::vector<PiecewiseField> tests) {
  DofFamily f;
  f.tag = std::move(tag);
  f.entity = std::move(entity);
  f.count = static_cast<long>(tests.size());
  auto tests_ptr = std::make_shared<std::vector<PiecewiseField>>(std::move(tests));
  f.rows = [op, tests_ptr](const FieldLayout& l) {
    LinearMap M = op(l);
    return moment_rows(M.dst, *tests_ptr) * M.m;
  };
  return f;
}

}  // namespace

long DofSet::total() const {
  long t = 0;
  for (const auto& f : families) t += f.count;
  return t;
}

SparseMatrix DofSet::rows_for(const FieldLayout& l) const {
  SparseMatrix R(0, l.size());
  for (const auto& f : families) R = vstack(R, f.rows(l));
  R.cols = l.size();
  return R;
}

DenseMatrix DofSet::matrix() const { return rows_for(target->layout) * target->basis; }

// ---------------------------------------------------------------------------
// U0

DofSet dofs_u0(SpaceCache& cache, int r) {
  if (r < 3) throw std::invalid_argument("dofs_u0: r >= 3 required");
  const SplitComplex& sc = cache.sc();
  DofSet ds;
  ds.space = "U0";
  ds.r = r;
  ds.target = &cache.tet_space("U0", r + 1);

  // (a) vertex values, (b) vertex gradients.
  for (int what = 0; what < 2; ++what) {
    DofFamily f;
    f.tag = what == 0 ? "U0:dofa" : "U0:dofb";
    f.entity = "vertex";
    f.count = what == 0 ? 12 : 36;
    f.rows = [&sc, what](const FieldLayout& l) {
      SparseMatrix R(0, l.size());
      for (int v = 0; v < 4; ++v) {
        if (what == 0) {
          R = vstack(R, point_rows(l, v, DenseMatrix::identity(3)));
        } else {
          LinearMap g = op_grad_vec(l);
          R = vstack(R, point_rows(g.dst, v, DenseMatrix::identity(9)) * g.m);
        }
      }
      R.cols = l.size();
      return R;
    };
    ds.families.push_back(std::move(f));
  }

  // (c) edge moments, (d) edge normal-derivative moments.
  for (const auto& e : sc.macro_edges) {
    long pa = e[0], pb = e[1];
    {
      FieldLayout tl = edge_layout(sc, pa, pb, r - 3, 3);
      ds.families.push_back(moment_family(
          "U0:dofc", "edge", [&sc, pa, pb](const FieldLayout& l) { return trace_to_edge(l, pa, pb); },
          unit_fields(tl)));
    }
    const Vec3 d = sc.points[pb] - sc.points[pa];
    auto [n1, n2] = edge_normal_pair(d);
    for (const Vec3& nn : {n1, n2}) {
      FieldLayout tl = edge_layout(sc, pa, pb, r - 2, 3);
      ds.families.push_back(moment_family(
          "U0:dofd", "edge",
          [&sc, pa, pb, nn](const FieldLayout& l) {
            LinearMap d1 = op_dirderiv(l, nn);
            return compose(trace_to_edge(d1.dst, pa, pb), d1);
          },
          unit_fields(tl)));
    }
  }

  // Face families.
  for (int fi = 0; fi < 4; ++fi) {
    const Frame& fr = sc.faces[fi].frame;
    DenseMatrix Q = q_matrix(fr);
    const FESpace& s0ring = cache.face_space("S0r", r + 1, fi);
    const FESpace& r0 = cache.face_space("R0", r, fi);
    FESpace s0ring2 = face_tensor_tangent("S0r2", s0ring);
    FESpace r02 = face_tensor_tangent("R02", r0);

    // (e) eps_F(u_F) : eps_F(kappa), kappa in [ring S0_{r+1}]^2.
    {
      LinearMap epsk = op_epsF(s0ring2.layout);
      ds.families.push_back(moment_family(
          "U0:dofe", "face",
          [&sc, fi, Q](const FieldLayout& l) {
            LinearMap tr = trace_to_face(l, fi, 0);
            LinearMap q = value_op(tr.dst, 3, Q);
            return compose(op_epsF(q.dst), compose(q, tr));
          },
          mapped_fields(epsk, basis_fields(s0ring2))));
    }
    // (f) [eps(u)]_Fn . grad_F(ring S0).
    {
      LinearMap gk = op_gradF_scalar(s0ring.layout);
      ds.families.push_back(moment_family(
          "U0:doff", "face",
          [&sc, fi, Q, &fr](const FieldLayout& l) {
            LinearMap eps = op_eps(l);
            LinearMap tr = trace_to_face(eps.dst, fi, 0);
            return compose(value_op(tr.dst, 3, Q * vmap_mat_vec(fr.n)), compose(tr, eps));
          },
          mapped_fields(gk, basis_fields(s0ring))));
    }
    // (g) dn(u . n) vs ring R0_r.
    ds.families.push_back(moment_family(
        "U0:dofg", "face",
        [&sc, fi, &fr](const FieldLayout& l) {
          LinearMap dn = value_op(l, 1, vmap_dot(fr.n));
          LinearMap dd = op_dirderiv(dn.dst, fr.n);
          return compose(trace_to_face(dd.dst, fi, 0), compose(dd, dn));
        },
        basis_fields(r0)));
    // (h) grad_F(dn u_F) : grad_F(kappa), kappa in [R0]^2.  The H^1-type
    // pairing (the form the commuting argument manipulates) rather than the
    // plain value moments: both determine the same trace data on the ring
    // space, but only this pairing makes Theorem 6.1 exact, matching the
    // grad_F([R0]^2) tests of the U1 family it must annihilate.
    {
      LinearMap gk = op_gradF_vec(r02.layout);
      ds.families.push_back(moment_family(
          "U0:dofh", "face",
          [&sc, fi, Q, &fr](const FieldLayout& l) {
            LinearMap q = value_op(l, 3, Q);
            LinearMap dd = op_dirderiv(q.dst, fr.n);
            LinearMap tr = compose(trace_to_face(dd.dst, fi, 0), compose(dd, q));
            return compose(op_gradF_vec(tr.dst), tr);
          },
          mapped_fields(gk, basis_fields(r02))));
    }
  }

  // (i) interior: eps : eps over ring U0.
  {
    const FESpace& u0r = cache.tet_space("U0r", r + 1);
    LinearMap epsk = op_eps(u0r.layout);
    ds.families.push_back(moment_family(
        "U0:dofi", "interior", [](const FieldLayout& l) { return op_eps(l); },
        mapped_fields(epsk, basis_fields(u0r))));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// U1

DofSet dofs_u1(SpaceCache& cache, int r) {
  if (r < 3) throw std::invalid_argument("dofs_u1: r >= 3 required");
  const SplitComplex& sc = cache.sc();
  DofSet ds;
  ds.space = "U1";
  ds.r = r;
  ds.target = &cache.tet_space("U1", r);

  // (a) vertex values of the six symmetric components.
  {
    DofFamily f;
    f.tag = "U1:dofa";
    f.entity = "vertex";
    f.count = 24;
    f.rows = [&sc](const FieldLayout& l) {
      SparseMatrix R(0, l.size());
      for (int v = 0; v < 4; ++v) R = vstack(R, point_rows(l, v, sym_component_selector()));
      R.cols = l.size();
      return R;
    };
    ds.families.push_back(std::move(f));
  }

  // (b), (c): edge moments.
  for (const auto& e : sc.macro_edges) {
    long pa = e[0], pb = e[1];
    ds.families.push_back(moment_family(
        "U1:dofb", "edge", [&sc, pa, pb](const FieldLayout& l) { return trace_to_edge(l, pa, pb); },
        sym_poly_edge_tests(sc, pa, pb, r - 2)));
    const Vec3 t = sc.points[pb] - sc.points[pa];
    FieldLayout tl = edge_layout(sc, pa, pb, r - 1, 3);
    ds.families.push_back(moment_family(
        "U1:dofc", "edge",
        [&sc, pa, pb, t](const FieldLayout& l) {
          LinearMap c = op_curl_mat(l);
          LinearMap sl = value_op(c.dst, 3, vmap_vec_mat(t));  // (curl u)' t = M' t
          return compose(trace_to_edge(sl.dst, pa, pb), compose(sl, c));
        },
        unit_fields(tl)));
  }

  // Face families.
  for (int fi = 0; fi < 4; ++fi) {
    const Frame& fr = sc.faces[fi].frame;
    DenseMatrix Q = q_matrix(fr);
    const Rational nn = fr.nn;

    auto inc_then = [&sc, fi](const DenseMatrix& V) {
      return [&sc, fi, V](const FieldLayout& l) {
        LinearMap inc = op_inc(l);
        LinearMap tr = trace_to_face(inc.dst, fi, 0);
        return compose(value_op(tr.dst, V.rows, V), compose(tr, inc));
      };
    };
    auto trace_then = [&sc, fi](const DenseMatrix& V) {
      return [&sc, fi, V](const FieldLayout& l) {
        LinearMap tr = trace_to_face(l, fi, 0);
        return compose(value_op(tr.dst, V.rows, V), tr);
      };
    };

    // (d) (inc u)_FF vs Qperp_{r-2}.
    ds.families.push_back(moment_family("U1:dofd", "face", inc_then(vmap_sandwich_QQ(fr)),
                                        basis_fields(cache.face_space("Qperp", r - 2, fi))));
    // (e) (inc u)_nn vs ring Q2_{r-2}.
    ds.families.push_back(moment_family("U1:dofe", "face", inc_then(vmap_dot(fr.n) * vmap_mat_vec(fr.n)),
                                        basis_fields(cache.face_space("Q2r", r - 2, fi))));
    // (f) (inc u)_Fn vs V1div_{r-2} / R(F) (mass-orthogonal complement).
    {
      const FESpace& v1 = cache.face_space("V1div", r - 2, fi);
      const FESpace& rf = cache.face_space("RF", r - 2, fi);
      DenseMatrix G = mass_matrix(v1.layout).dense();
      DenseMatrix comp = gram_complement(rf.basis, v1.basis, G);
      std::vector<PiecewiseField> tests;
      for (long j = 0; j < comp.cols; ++j) {
        PiecewiseField f(v1.layout);
        f.coef = comp.col(j);
        tests.push_back(std::move(f));
      }
      ds.families.push_back(
          moment_family("U1:doff", "face", inc_then(Q * vmap_mat_vec(fr.n)), std::move(tests)));
    }
    // (g) u_FF vs eps_F([ring S0_{r+1}]^2).
    {
      FESpace s0ring2 = face_tensor_tangent("S0r2", cache.face_space("S0r", r + 1, fi));
      LinearMap epsk = op_epsF(s0ring2.layout);
      ds.families.push_back(moment_family("U1:dofg", "face", trace_then(vmap_sandwich_QQ(fr)),
                                          mapped_fields(epsk, basis_fields(s0ring2))));
    }
    // (h) ([(curl u)']_FF - grad_F(u_Fn-perp)) vs grad_F([R0]^2).
    {
      FESpace r02 = face_tensor_tangent("R02", cache.face_space("R0", r, fi));
      LinearMap gk = op_gradF_vec(r02.layout);
      DenseMatrix slice = vmap_cross_right(fr.n) * (Q * vmap_mat_vec(fr.n));
      for (auto& x : slice.a) x /= nn;
      auto op = [&sc, fi, Q, slice, &fr](const FieldLayout& l) {
        LinearMap c = op_curl_mat(l);
        LinearMap tau = value_op(c.dst, 9, vmap_tau());
        LinearMap trc = trace_to_face(tau.dst, fi, 0);
        LinearMap a = compose(value_op(trc.dst, 9, vmap_sandwich_QQ(fr)), compose(trc, compose(tau, c)));
        LinearMap tru = trace_to_face(l, fi, 0);
        LinearMap sl = compose(value_op(tru.dst, 3, slice), tru);
        LinearMap b = compose(op_gradF_vec(sl.dst), sl);
        return lm_sub(a, b);
      };
      ds.families.push_back(
          moment_family("U1:dofh", "face", op, mapped_fields(gk, basis_fields(r02))));
    }
    // (i) u_Fn vs grad_F(ring S0_{r+1}).
    {
      const FESpace& s0ring = cache.face_space("S0r", r + 1, fi);
      LinearMap gk = op_gradF_scalar(s0ring.layout);
      ds.families.push_back(moment_family("U1:dofi", "face", trace_then(Q * vmap_mat_vec(fr.n)),
                                          mapped_fields(gk, basis_fields(s0ring))));
    }
    // (j) u_nn vs R0_r.
    ds.families.push_back(moment_family("U1:dofj", "face", trace_then(vmap_dot(fr.n) * vmap_mat_vec(fr.n)),
                                        basis_fields(cache.face_space("R0", r, fi))));
  }

  // (k) interior inc : inc vs ring U1_r; (l) interior u : eps(ring U0_{r+1}).
  {
    const FESpace& u1r = cache.tet_space("U1r", r);
    LinearMap inck = op_inc(u1r.layout);
    ds.families.push_back(moment_family(
        "U1:dofk", "interior", [](const FieldLayout& l) { return op_inc(l); },
        image_basis_fields(inck, u1r)));
  }
  {
    const FESpace& u0r = cache.tet_space("U0r", r + 1);
    LinearMap epsk = op_eps(u0r.layout);
    ds.families.push_back(moment_family(
        "U1:dofl", "interior",
        [](const FieldLayout& l) {
          return LinearMap{l, l, SparseMatrix::identity(l.size())};
        },
        mapped_fields(epsk, basis_fields(u0r))));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// U2 / U3

DofSet dofs_u2(SpaceCache& cache, int r) {
  if (r < 3) throw std::invalid_argument("dofs_u2: r >= 3 required");
  const SplitComplex& sc = cache.sc();
  DofSet ds;
  ds.space = "U2";
  ds.r = r;
  ds.target = &cache.tet_space("U2", r - 2);

  for (int fi = 0; fi < 4; ++fi) {
    const Frame& fr = sc.faces[fi].frame;
    DenseMatrix Q = q_matrix(fr);
    auto trace_then = [&sc, fi](const DenseMatrix& V) {
      return [&sc, fi, V](const FieldLayout& l) {
        LinearMap tr = trace_to_face(l, fi, 0);
        return compose(value_op(tr.dst, V.rows, V), tr);
      };
    };
    // (a) u_FF vs Qperp_{r-2}.
    ds.families.push_back(moment_family("U2:dofa", "face", trace_then(vmap_sandwich_QQ(fr)),
                                        basis_fields(cache.face_space("Qperp", r - 2, fi))));
    // (b) u_nn vs V2_{r-2}(F^ct) (the full piecewise space).
    ds.families.push_back(moment_family("U2:dofb", "face", trace_then(vmap_dot(fr.n) * vmap_mat_vec(fr.n)),
                                        unit_fields(face_layout(sc, fi, r - 2, 1))));
    // (c) u_nF vs V1div_{r-2}.
    ds.families.push_back(moment_family("U2:dofc", "face", trace_then(Q * vmap_mat_vec(fr.n)),
                                        basis_fields(cache.face_space("V1div", r - 2, fi))));
  }
  // (d) div u vs ring U3_{r-3}.
  ds.families.push_back(moment_family(
      "U2:dofd", "interior", [](const FieldLayout& l) { return op_div_mat(l); },
      basis_fields(cache.tet_space("U3r", r - 3))));
  // (e) u : inc(ring U1_r).
  {
    const FESpace& u1r = cache.tet_space("U1r", r);
    LinearMap inck = op_inc(u1r.layout);
    ds.families.push_back(moment_family(
        "U2:dofe", "interior",
        [](const FieldLayout& l) {
          return LinearMap{l, l, SparseMatrix::identity(l.size())};
        },
        image_basis_fields(inck, u1r)));
  }
  return ds;
}

DofSet dofs_u3(SpaceCache& cache, int r) {
  if (r < 3) throw std::invalid_argument("dofs_u3: r >= 3 required");
  const SplitComplex& sc = cache.sc();
  DofSet ds;
  ds.space = "U3";
  ds.r = r;
  ds.target = &cache.tet_space("U3", r - 3);
  auto ident = [](const FieldLayout& l) {
    return LinearMap{l, l, SparseMatrix::identity(l.size())};
  };
  ds.families.push_back(
      moment_family("U3:dofa", "interior", ident, rigid_fields(volume_layout(sc, 1, 3))));
  ds.families.push_back(moment_family("U3:dofb", "interior", ident, basis_fields(cache.tet_space("U3r", r - 3))));
  return ds;
}

DofSet dofs_of(SpaceCache& cache, const std::string& space, int r) {
  if (space == "U0") return dofs_u0(cache, r);
  if (space == "U1") return dofs_u1(cache, r);
  if (space == "U2") return dofs_u2(cache, r);
  if (space == "U3") return dofs_u3(cache, r);
  throw std::invalid_argument("dofs_of: unknown space '" + space + "'");
}

// ---------------------------------------------------------------------------
// Unisolvence / projection

UnisolvenceReport unisolvence(SpaceCache& cache, const std::string& space, int r) {
  DofSet ds = dofs_of(cache, space, r);
  UnisolvenceReport rep;
  rep.space = space;
  rep.r = r;
  rep.dim = ds.target->dim;
  rep.dof_count = ds.total();
  rep.square = (rep.dim == rep.dof_count);
  for (const auto& f : ds.families) {
    bool merged = false;
    for (auto& [tag, c] : rep.family_counts)
      if (tag == f.tag) {
        c += f.count;
        merged = true;
      }
    if (!merged) rep.family_counts.push_back({f.tag, f.count});
    if (f.entity == "vertex") rep.vertex_dofs += f.count;
    if (f.entity == "edge") rep.edge_dofs += f.count;
    if (f.entity == "face") rep.face_dofs += f.count;
    if (f.entity == "interior") rep.interior_dofs += f.count;
  }
  if (!rep.square) return rep;

  DenseMatrix M = ds.matrix();
  // Nonzero determinant mod a random prime certifies nonsingularity exactly.
  std::uint64_t seed = prime_seed() ^ 0xd0fULL;
  bool decided = false;
  for (int attempt = 0; attempt < 2 && !decided; ++attempt) {
    auto primes = random_primes(2, seed + attempt);
    for (std::uint64_t p : primes) {
      Mod64 m{p};
      ModMatrix W(m, M.rows, M.cols);
      bool ok = true;
      for (long i = 0; i < M.rows && ok; ++i)
        for (long j = 0; j < M.cols; ++j) {
          if (M.at(i, j) == 0) continue;
          std::uint64_t v;
          if (!reduce_mod(M.at(i, j), m, v)) {
            ok = false;
            break;
          }
          W.at(i, j) = v;
        }
      if (!ok) continue;
      if (modular_rank(W) == M.rows) {
        rep.nonsingular = true;
        rep.mode = "modular-certified";
        decided = true;
        break;
      }
      // Rank-deficient mod p: inconclusive alone; try the second prime, then exact.
    }
  }
  if (!decided) {
    rep.nonsingular = (rank_of(from_dense(M), RankMode::Exact).rank == M.rows);
    rep.mode = "exact";
  }
  return rep;
}

Projection::Projection(SpaceCache& cache, DofSet dofs) : dofs_(std::move(dofs)) {
  (void)cache;
  DenseMatrix M = dofs_.matrix();
  if (M.rows != M.cols)
    throw std::runtime_error("Projection: DOF matrix is not square (" + std::to_string(M.rows) + " x " +
                             std::to_string(M.cols) + ")");
  lu_ = std::make_unique<LuFactors>(M);  // throws with a rank witness when singular
}

std::vector<Rational> Projection::coefficients(const PiecewiseField& input) const {
  SparseMatrix R = dofs_.rows_for(input.layout);
  std::vector<Rational> d = mul(R, input.coef);
  return lu_->solve(d);
}

PiecewiseField Projection::apply(const PiecewiseField& input) const {
  std::vector<Rational> c = coefficients(input);
  PiecewiseField out(dofs_.target->layout);
  out.coef = mul(from_dense(dofs_.target->basis), c);
  return out;
}

// ---------------------------------------------------------------------------
// Commuting suite

namespace {

Poly random_poly(Rng& rng, int deg) {
  Poly p;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j)
      for (int k = 0; i + j + k <= deg; ++k) {
        Rational c = rng.small_int(-2, 2);
        if (c != 0) p.terms[{i, j, k}] = c;
      }
  return p;
}

}  // namespace

CommutingReport commuting_suite(SpaceCache& cache, int r, int trials, std::uint64_t seed) {
  const SplitComplex& sc = cache.sc();
  CommutingReport rep;
  rep.r = r;
  rep.trials = trials;
  rep.seed = seed;

  Projection p0(cache, dofs_u0(cache, r));
  Projection p1(cache, dofs_u1(cache, r));
  Projection p2(cache, dofs_u2(cache, r));
  Projection p3(cache, dofs_u3(cache, r));

  const int d = r + 2;
  Rng rng(seed);
  LinearMap eps_t = op_eps(volume_layout(sc, r + 1, 3));
  LinearMap inc_t = op_inc(volume_layout(sc, r, 9));
  LinearMap div_t = op_div_mat(volume_layout(sc, r - 2, 9));

  for (int t = 0; t < trials; ++t) {
    // u: random vector polynomial of degree r+2.
    std::array<Poly, 3> u;
    for (auto& p : u) p = random_poly(rng, d);
    // v, w: random symmetric matrix polynomials of degree r+2.
    std::array<std::array<Poly, 3>, 3> v, w;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        v[i][j] = random_poly(rng, d);
        v[j][i] = v[i][j];
        w[i][j] = random_poly(rng, d);
        w[j][i] = w[i][j];
      }

    // com:epsilon.
    {
      PiecewiseField uf = field_from_polys(volume_layout(sc, d, 3), {u[0], u[1], u[2]});
      PiecewiseField pu = p0.apply(uf);
      std::vector<Rational> lhs = mul(eps_t.m, pu.coef);
      std::vector<Poly> epsu(9);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) epsu[3 * i + j] = frac(1, 2) * (u[i].deriv(j) + u[j].deriv(i));
      PiecewiseField ef = field_from_polys(volume_layout(sc, d, 9), epsu);
      std::vector<Rational> rhs = p1.apply(ef).coef;
      bool ok = (lhs == rhs);
      rep.checks.push_back({"com:epsilon trial " + std::to_string(t), "equal", ok ? "equal" : "differs", ok});
      if (!ok) ++rep.failures;
    }
    // com:inc.
    {
      PiecewiseField vf = field_from_polys(volume_layout(sc, d, 9),
                                           {v[0][0], v[0][1], v[0][2], v[1][0], v[1][1], v[1][2], v[2][0],
                                            v[2][1], v[2][2]});
      PiecewiseField pv = p1.apply(vf);
      std::vector<Rational> lhs = mul(inc_t.m, pv.coef);
      auto curl_rows = [](const std::array<std::array<Poly, 3>, 3>& M) {
        std::array<std::array<Poly, 3>, 3> C;
        for (int i = 0; i < 3; ++i) {
          C[i][0] = M[i][2].deriv(1) - M[i][1].deriv(2);
          C[i][1] = M[i][0].deriv(2) - M[i][2].deriv(0);
          C[i][2] = M[i][1].deriv(0) - M[i][0].deriv(1);
        }
        return C;
      };
      auto transpose = [](const std::array<std::array<Poly, 3>, 3>& M) {
        auto T = M;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) T[i][j] = M[j][i];
        return T;
      };
      auto incv = curl_rows(transpose(curl_rows(v)));
      PiecewiseField inf = field_from_polys(volume_layout(sc, d, 9),
                                            {incv[0][0], incv[0][1], incv[0][2], incv[1][0], incv[1][1],
                                             incv[1][2], incv[2][0], incv[2][1], incv[2][2]});
      std::vector<Rational> rhs = p2.apply(inf).coef;
      bool ok = (lhs == rhs);
      rep.checks.push_back({"com:inc trial " + std::to_string(t), "equal", ok ? "equal" : "differs", ok});
      if (!ok) ++rep.failures;
    }
    // com:div.
    {
      PiecewiseField wf = field_from_polys(volume_layout(sc, d, 9),
                                           {w[0][0], w[0][1], w[0][2], w[1][0], w[1][1], w[1][2], w[2][0],
                                            w[2][1], w[2][2]});
      PiecewiseField pw = p2.apply(wf);
      std::vector<Rational> lhs = mul(div_t.m, pw.coef);
      std::array<Poly, 3> divw;
      for (int i = 0; i < 3; ++i) divw[i] = w[i][0].deriv(0) + w[i][1].deriv(1) + w[i][2].deriv(2);
      PiecewiseField df = field_from_polys(volume_layout(sc, d, 3), {divw[0], divw[1], divw[2]});
      std::vector<Rational> rhs = p3.apply(df).coef;
      bool ok = (lhs == rhs);
      rep.checks.push_back({"com:div trial " + std::to_string(t), "equal", ok ? "equal" : "differs", ok});
      if (!ok) ++rep.failures;
    }
  }
  return rep;
}

}  // namespace wfela
