#include "wfela/fespaces.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace wfela {

namespace {

DenseMatrix ident_c(int n) { return DenseMatrix::identity(n); }

DenseMatrix q_of(const Vec3& n) {
  Frame fr;
  fr.n = n;
  fr.nn = dot(n, n);
  return q_matrix(fr);
}

DenseMatrix dotrow(const Vec3& n) { return vmap_dot(n); }

/// Rows of the pointwise symmetry constraint M = M'.
DenseMatrix sym_rows3() {
  DenseMatrix V(3, 9);
  V.at(0, 1) = 1;
  V.at(0, 3) = -1;
  V.at(1, 2) = 1;
  V.at(1, 6) = -1;
  V.at(2, 5) = 1;
  V.at(2, 7) = -1;
  return V;
}

SparseMatrix pointwise_rows(const FieldLayout& l, const DenseMatrix& V) { return value_op(l, V.rows, V).m; }

}  // namespace

// ---------------------------------------------------------------------------
// Row builders

SparseMatrix iface_rows(const FieldLayout& l, const std::function<DenseMatrix(const Interface&)>& L) {
  const SplitComplex& sc = *l.sc;
  SparseMatrix R(0, l.size());
  for (const auto& f : sc.interfaces) {
    DenseMatrix V = L(f);
    std::vector<long> sub(f.pts.begin(), f.pts.end());
    auto pa = trace_pairs(l.degree, l.cells[f.cellA].pts, sub);
    auto pb = trace_pairs(l.degree, l.cells[f.cellB].pts, sub);
    for (size_t k = 0; k < pa.size(); ++k) {
      for (long o = 0; o < V.rows; ++o) {
        std::vector<std::pair<long, Rational>> row;
        for (int c = 0; c < l.ncomp; ++c) {
          if (V.at(o, c) == 0) continue;
          row.push_back({l.index(f.cellA, pa[k].second, c), V.at(o, c)});
          row.push_back({l.index(f.cellB, pb[k].second, c), -V.at(o, c)});
        }
        R.append_row(std::move(row));
      }
    }
  }
  R.cols = l.size();
  return R;
}

SparseMatrix bdry_rows(const FieldLayout& l, const std::vector<int>& faces,
                       const std::function<DenseMatrix(const MacroFace&)>& L) {
  const SplitComplex& sc = *l.sc;
  SparseMatrix R(0, l.size());
  for (int fi : faces) {
    const MacroFace& mf = sc.faces[fi];
    DenseMatrix V = L(mf);
    for (int t = 0; t < 3; ++t) {
      int side = mf.tris[t].cell[0] >= 0 ? 0 : 1;
      int cell = mf.tris[t].cell[side];
      std::vector<long> sub(mf.tris[t].pts.begin(), mf.tris[t].pts.end());
      for (const auto& [sb, src] : trace_pairs(l.degree, l.cells[cell].pts, sub)) {
        for (long o = 0; o < V.rows; ++o) {
          std::vector<std::pair<long, Rational>> row;
          for (int c = 0; c < l.ncomp; ++c)
            if (V.at(o, c) != 0) row.push_back({l.index(cell, src, c), V.at(o, c)});
          R.append_row(std::move(row));
        }
      }
    }
  }
  R.cols = l.size();
  return R;
}

SparseMatrix ct_edge_rows(const FieldLayout& l, const std::vector<int>& faces, int side,
                          const std::function<DenseMatrix(const CtEdge&)>& L) {
  const SplitComplex& sc = *l.sc;
  SparseMatrix R(0, l.size());
  for (int fi : faces) {
    const MacroFace& mf = sc.faces[fi];
    for (int k = 0; k < 3; ++k) {
      const CtEdge& ce = sc.ct_edges[mf.ct_edges[k]];
      int c1 = mf.tris[ce.q1].cell[side], c2 = mf.tris[ce.q2].cell[side];
      if (c1 < 0 || c2 < 0) continue;
      DenseMatrix V = L(ce);
      std::vector<long> sub{std::min(ce.p_m, ce.p_v), std::max(ce.p_m, ce.p_v)};
      auto pa = trace_pairs(l.degree, l.cells[c1].pts, sub);
      auto pb = trace_pairs(l.degree, l.cells[c2].pts, sub);
      for (size_t t = 0; t < pa.size(); ++t) {
        for (long o = 0; o < V.rows; ++o) {
          std::vector<std::pair<long, Rational>> row;
          for (int c = 0; c < l.ncomp; ++c) {
            if (V.at(o, c) == 0) continue;
            row.push_back({l.index(c1, pa[t].second, c), V.at(o, c)});
            row.push_back({l.index(c2, pb[t].second, c), -V.at(o, c)});
          }
          R.append_row(std::move(row));
        }
      }
    }
  }
  R.cols = l.size();
  return R;
}

SparseMatrix theta_rows(const FieldLayout& l, const std::vector<int>& ct_edges,
                        const std::function<DenseMatrix(const CtEdge&)>& L) {
  const SplitComplex& sc = *l.sc;
  SparseMatrix R(0, l.size());
  const int sign_tri[2] = {+1, -1};
  const int sign_side[2] = {+1, -1};
  for (int e : ct_edges) {
    const CtEdge& ce = sc.ct_edges[e];
    JumpPairing jp = sc.theta_slots(e);
    DenseMatrix V = L(ce);
    std::vector<long> sub{std::min(ce.p_m, ce.p_v), std::max(ce.p_m, ce.p_v)};
    const long nsub = bern_count(1, l.degree);
    for (long t = 0; t < nsub; ++t) {
      for (long o = 0; o < V.rows; ++o) {
        std::vector<std::pair<long, Rational>> row;
        for (int side = 0; side < 2; ++side) {
          for (int which = 0; which < 2; ++which) {
            int cell = jp.cell_of[side][which];
            if (cell < 0) continue;
            auto pairs = trace_pairs(l.degree, l.cells[cell].pts, sub);
            const Rational s(sign_side[side] * sign_tri[which]);
            for (int c = 0; c < l.ncomp; ++c)
              if (V.at(o, c) != 0) row.push_back({l.index(cell, pairs[t].second, c), s * V.at(o, c)});
          }
        }
        R.append_row(std::move(row));
      }
    }
  }
  R.cols = l.size();
  return R;
}

SparseMatrix moment_rows(const FieldLayout& l, const std::vector<PiecewiseField>& tests) {
  SparseMatrix R(0, l.size());
  const int d = l.cells[0].dim;
  const MultiIndexSet& A = MultiIndexSet::get(d, l.degree);
  for (const auto& t : tests) {
    if (t.layout.ncomp != l.ncomp) throw std::invalid_argument("moment_rows: component mismatch");
    const MultiIndexSet& B = MultiIndexSet::get(d, t.layout.degree);
    std::vector<std::pair<long, Rational>> row;
    for (int c = 0; c < static_cast<int>(l.cells.size()); ++c) {
      for (long i = 0; i < A.size(); ++i) {
        for (int comp = 0; comp < l.ncomp; ++comp) {
          Rational acc = 0;
          for (long j = 0; j < B.size(); ++j) {
            const Rational& tv = t.coef[t.layout.index(c, j, comp)];
            if (tv == 0) continue;
            BigInt num = 1;
            for (int kk = 0; kk <= d; ++kk) num *= binomial(A[i][kk] + B[j][kk], A[i][kk]);
            acc += tv * Rational(num) /
                   Rational(binomial(l.degree + t.layout.degree, l.degree) *
                            binomial(l.degree + t.layout.degree + d, d));
          }
          if (acc != 0) row.push_back({l.index(c, i, comp), acc * l.cells[c].measure});
        }
      }
    }
    R.append_row(std::move(row));
  }
  R.cols = l.size();
  return R;
}

SparseMatrix face_edge_rows(const FieldLayout& l, const std::function<DenseMatrix(const CtEdge&)>& L) {
  const SplitComplex& sc = *l.sc;
  const MacroFace& mf = sc.faces[l.face];
  SparseMatrix R(0, l.size());
  for (int k = 0; k < 3; ++k) {
    const CtEdge& ce = sc.ct_edges[mf.ct_edges[k]];
    DenseMatrix V = L(ce);
    std::vector<long> sub{std::min(ce.p_m, ce.p_v), std::max(ce.p_m, ce.p_v)};
    std::vector<long> tri1(mf.tris[ce.q1].pts.begin(), mf.tris[ce.q1].pts.end());
    std::vector<long> tri2(mf.tris[ce.q2].pts.begin(), mf.tris[ce.q2].pts.end());
    auto pa = trace_pairs(l.degree, tri1, sub);
    auto pb = trace_pairs(l.degree, tri2, sub);
    for (size_t t = 0; t < pa.size(); ++t) {
      for (long o = 0; o < V.rows; ++o) {
        std::vector<std::pair<long, Rational>> row;
        for (int c = 0; c < l.ncomp; ++c) {
          if (V.at(o, c) == 0) continue;
          row.push_back({l.index(ce.q1, pa[t].second, c), V.at(o, c)});
          row.push_back({l.index(ce.q2, pb[t].second, c), -V.at(o, c)});
        }
        R.append_row(std::move(row));
      }
    }
  }
  R.cols = l.size();
  return R;
}

SparseMatrix face_bdry_rows(const FieldLayout& l, const std::function<DenseMatrix(int)>& L) {
  const SplitComplex& sc = *l.sc;
  const MacroFace& mf = sc.faces[l.face];
  SparseMatrix R(0, l.size());
  for (int k = 0; k < 3; ++k) {
    DenseMatrix V = L(k);
    std::vector<long> tri(mf.tris[k].pts.begin(), mf.tris[k].pts.end());
    std::vector<long> mv;
    for (long p : tri)
      if (p != mf.m_point) mv.push_back(p);
    for (const auto& [sb, src] : trace_pairs(l.degree, tri, mv)) {
      for (long o = 0; o < V.rows; ++o) {
        std::vector<std::pair<long, Rational>> row;
        for (int c = 0; c < l.ncomp; ++c)
          if (V.at(o, c) != 0) row.push_back({l.index(k, src, c), V.at(o, c)});
        R.append_row(std::move(row));
      }
    }
  }
  R.cols = l.size();
  return R;
}

// ---------------------------------------------------------------------------
// Space assembly

FESpace make_space(SpaceDescriptor desc, FieldLayout layout, std::vector<SparseMatrix> blocks) {
  FESpace s;
  s.desc = std::move(desc);
  s.layout = std::move(layout);
  SparseMatrix C(0, s.layout.size());
  for (auto& b : blocks) C = vstack(C, b);
  C.cols = s.layout.size();
  s.constraints = std::move(C);
  s.basis = nullspace(s.constraints);
  s.dim = s.basis.cols;
  return s;
}

FESpace free_space(SpaceDescriptor desc, FieldLayout layout) {
  FESpace s;
  s.desc = std::move(desc);
  s.layout = std::move(layout);
  s.constraints = SparseMatrix(0, s.layout.size());
  s.basis = DenseMatrix::identity(s.layout.size());
  s.dim = s.layout.size();
  return s;
}

FESpace null_space(SpaceDescriptor desc, FieldLayout layout) {
  FESpace s;
  s.desc = std::move(desc);
  s.layout = std::move(layout);
  s.constraints = from_dense(DenseMatrix::identity(s.layout.size()));
  s.basis = DenseMatrix(s.layout.size(), 0);
  s.dim = 0;
  return s;
}

FESpace image_space(const std::string& name, const LinearMap& M, const FESpace& src) {
  FESpace s;
  s.desc = {name, src.desc.r, src.desc.face};
  s.layout = M.dst;
  s.image_form = true;
  DenseMatrix W = M.m * src.basis;
  if (W.cols == 0) {
    s.basis = DenseMatrix(s.layout.size(), 0);
    s.dim = 0;
    return s;
  }
  auto piv = independent_columns(W);
  s.basis = DenseMatrix(W.rows, static_cast<long>(piv.size()));
  for (size_t k = 0; k < piv.size(); ++k) s.basis.set_col(static_cast<long>(k), W.col(piv[k]));
  s.dim = s.basis.cols;
  return s;
}

FESpace tensor_to_vector(const std::string& name, const FESpace& scalar) {
  if (scalar.layout.ncomp != 1) throw std::invalid_argument("tensor_to_vector: scalar space required");
  FESpace s;
  s.desc = {name, scalar.desc.r, scalar.desc.face};
  s.layout = scalar.layout;
  s.layout.ncomp = 3;
  s.dim = scalar.dim * 3;
  s.basis = DenseMatrix(s.layout.size(), s.dim);
  const long nb = scalar.layout.nbern();
  for (long j = 0; j < scalar.dim; ++j)
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < static_cast<int>(scalar.layout.cells.size()); ++c)
        for (long b = 0; b < nb; ++b)
          s.basis.at(s.layout.index(c, b, k), 3 * j + k) = scalar.basis.at(scalar.layout.index(c, b, 0), j);
  // Constraints: one copy of each scalar row per component.
  SparseMatrix C(0, s.layout.size());
  for (const auto& row : scalar.constraints.row) {
    for (int k = 0; k < 3; ++k) {
      std::vector<std::pair<long, Rational>> r;
      for (const auto& [idx, v] : row) r.push_back({idx * 3 + k, v});
      C.append_row(std::move(r));
    }
  }
  C.cols = s.layout.size();
  s.constraints = std::move(C);
  return s;
}

FESpace tensor_to_matrix(const std::string& name, const FESpace& vec) {
  if (vec.layout.ncomp != 3) throw std::invalid_argument("tensor_to_matrix: vector space required");
  FESpace s;
  s.desc = {name, vec.desc.r, vec.desc.face};
  s.layout = vec.layout;
  s.layout.ncomp = 9;
  s.dim = vec.dim * 3;
  s.basis = DenseMatrix(s.layout.size(), s.dim);
  const long nb = vec.layout.nbern();
  for (long j = 0; j < vec.dim; ++j)
    for (int row = 0; row < 3; ++row)
      for (int c = 0; c < static_cast<int>(vec.layout.cells.size()); ++c)
        for (long b = 0; b < nb; ++b)
          for (int comp = 0; comp < 3; ++comp)
            s.basis.at(s.layout.index(c, b, 3 * row + comp), 3 * j + row) =
                vec.basis.at(vec.layout.index(c, b, comp), j);
  SparseMatrix C(0, s.layout.size());
  for (const auto& rw : vec.constraints.row) {
    for (int row = 0; row < 3; ++row) {
      std::vector<std::pair<long, Rational>> r;
      for (const auto& [idx, v] : rw) {
        long cell_b = idx / 3;
        int comp = static_cast<int>(idx % 3);
        r.push_back({cell_b * 9 + 3 * row + comp, v});
      }
      C.append_row(std::move(r));
    }
  }
  C.cols = s.layout.size();
  s.constraints = std::move(C);
  return s;
}

FESpace span_space(SpaceDescriptor desc, const FieldLayout& l, const std::vector<PiecewiseField>& gens) {
  FESpace s;
  s.desc = std::move(desc);
  s.layout = l;
  s.image_form = true;
  s.basis = DenseMatrix(l.size(), static_cast<long>(gens.size()));
  for (size_t k = 0; k < gens.size(); ++k) s.basis.set_col(static_cast<long>(k), gens[k].coef);
  s.dim = s.basis.cols;
  return s;
}

// ---------------------------------------------------------------------------
// Canonical generator fields

std::vector<PiecewiseField> rigid_fields(const FieldLayout& l) {
  std::vector<PiecewiseField> out;
  for (int k = 0; k < 3; ++k) {
    std::vector<Poly> c(3, Poly::constant(Rational(0)));
    c[k] = Poly::constant(Rational(1));
    out.push_back(field_from_polys(l, c));
  }
  // b x x for b = e_k.
  const int eps[3][3] = {{0, 3, 2}, {0, 0, 1}, {0, 0, 0}};
  (void)eps;
  for (int k = 0; k < 3; ++k) {
    std::vector<Poly> c(3, Poly::constant(Rational(0)));
    // (e_k x x)_i = eps_{k i j}... explicit:
    if (k == 0) {
      c[1] = Rational(-1) * Poly::var(2);
      c[2] = Poly::var(1);
    } else if (k == 1) {
      c[0] = Poly::var(2);
      c[2] = Rational(-1) * Poly::var(0);
    } else {
      c[0] = Rational(-1) * Poly::var(1);
      c[1] = Poly::var(0);
    }
    // e_k x x = (k x x); rows computed: for k=0: (0, -z, y)? check: e0 x x =
    // (0*z - 0*y, 0*x - 1*z, 1*y - 0*x) = (0, -z, y).
    out.push_back(field_from_polys(l, c));
  }
  return out;
}

std::vector<PiecewiseField> face_rigid_fields(const FieldLayout& l) {
  const Frame& fr = layout_frame(l);
  const SplitComplex& sc = *l.sc;
  const Vec3 m = sc.points[sc.faces[l.face].m_point];
  std::vector<PiecewiseField> out;
  for (const Vec3& b : {fr.b1, fr.b2}) {
    std::vector<Poly> c(3);
    for (int a = 0; a < 3; ++a) c[a] = Poly::constant(b[a]);
    out.push_back(field_from_polys(l, c));
  }
  // Rotation: n x Q(x - m).
  std::array<Poly, 3> qx;
  Poly ndot = Poly::constant(Rational(0));
  for (int b = 0; b < 3; ++b) ndot = ndot + fr.n[b] * (Poly::var(b) - Poly::constant(m[b]));
  for (int a = 0; a < 3; ++a)
    qx[a] = (Poly::var(a) - Poly::constant(m[a])) - (fr.n[a] / fr.nn) * ndot;
  std::vector<Poly> c(3);
  c[0] = fr.n[1] * qx[2] - fr.n[2] * qx[1];
  c[1] = fr.n[2] * qx[0] - fr.n[0] * qx[2];
  c[2] = fr.n[0] * qx[1] - fr.n[1] * qx[0];
  out.push_back(field_from_polys(l, c));
  return out;
}

std::vector<PiecewiseField> face_p1_fields(const FieldLayout& l) {
  const Frame& fr = layout_frame(l);
  const SplitComplex& sc = *l.sc;
  const Vec3 m = sc.points[sc.faces[l.face].m_point];
  std::vector<PiecewiseField> out;
  out.push_back(field_from_polys(l, {Poly::constant(Rational(1))}));
  for (const Vec3& b : {fr.b1, fr.b2}) {
    Poly p = Poly::constant(Rational(0));
    for (int a = 0; a < 3; ++a) p = p + b[a] * (Poly::var(a) - Poly::constant(m[a]));
    out.push_back(field_from_polys(l, {p}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SpaceCache

SpaceCache::SpaceCache(const SplitComplex& sc) : sc_(&sc) {}

namespace {
std::string key_of(const std::string& name, int r, int face, int tet) {
  std::ostringstream os;
  os << name << "|" << r << "|" << face << "|" << tet;
  return os.str();
}
}  // namespace

const SplitComplex& SpaceCache::tet_complex(int tet) {
  if (sc_->macro.tets.size() == 1) return *sc_;
  if (tet_complex_.empty()) tet_complex_.resize(sc_->macro.tets.size());
  if (!tet_complex_[tet]) {
    const auto& T = sc_->macro.tets[tet];
    std::array<int, 4> sorted = T;
    std::sort(sorted.begin(), sorted.end());
    MacroMesh m;
    for (int v : sorted) m.vertices.push_back(sc_->points[v]);
    m.tets.push_back({0, 1, 2, 3});
    m.interior_points.resize(1);
    m.interior_points[0] = sc_->points[sc_->z_point[tet]];
    SplitOptions opt;
    for (const auto& mf : sc_->faces) {
      if (mf.tet[0] != tet && mf.tet[1] != tet) continue;
      std::array<int, 3> local;
      for (int k = 0; k < 3; ++k)
        local[k] = static_cast<int>(std::find(sorted.begin(), sorted.end(), mf.verts[k]) - sorted.begin());
      std::sort(local.begin(), local.end());
      opt.face_points[local] = sc_->points[mf.m_point];
    }
    auto scp = std::make_shared<SplitComplex>(wf_split_global(m, opt));
    // Consistency of the injection: local cell k matches global cell 12*tet+k
    // geometrically (ascending point ids on both sides).
    for (int k = 0; k < 12; ++k) {
      const Cell& gc = sc_->cells[12 * tet + k];
      const Cell& lc = scp->cells[k];
      for (int i = 0; i < 4; ++i)
        if (!(scp->points[lc.pts[i]] == sc_->points[gc.pts[i]]))
          throw std::logic_error("tet_complex: cell correspondence broken");
    }
    tet_complex_[tet] = scp;
  }
  return *tet_complex_[tet];
}

SpaceCache& SpaceCache::tet_cache(int tet) {
  if (sc_->macro.tets.size() == 1) return *this;
  if (tet_cache_.empty()) tet_cache_.resize(sc_->macro.tets.size());
  if (!tet_cache_[tet]) tet_cache_[tet] = std::make_shared<SpaceCache>(tet_complex(tet));
  return *tet_cache_[tet];
}

long SpaceCache::tet_offset(int tet, const FieldLayout& global_layout) const {
  return 12L * tet * global_layout.nbern() * global_layout.ncomp;
}

const FESpace& SpaceCache::face_space(const std::string& name, int r, int face) {
  std::string key = key_of(name, r, face, -1);
  auto it = cache_.find(key);
  if (it == cache_.end())
    it = cache_.emplace(key, std::make_unique<FESpace>(build_face(name, r, face))).first;
  return *it->second;
}

const FESpace& SpaceCache::tet_space(const std::string& name, int r, int tet) {
  if (sc_->macro.tets.size() > 1) return tet_cache(tet).tet_space(name, r, 0);
  std::string key = key_of(name, r, -1, tet);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, std::make_unique<FESpace>(build_tet(name, r, tet))).first;
  return *it->second;
}

// ---------------------------------------------------------------------------
// 2D catalog

FESpace SpaceCache::build_face(const std::string& name, int r, int face) {
  const SplitComplex& sc = *sc_;
  const Frame& fr = sc.faces[face].frame;
  auto lay = [&](int deg, int nc) { return face_layout(sc, face, deg, nc); };
  SpaceDescriptor d{name, r, face};

  if (r < 0) return null_space(d, lay(0, name == "L1" || name == "L1r" || name.substr(0, 2) == "V1" ? 3 : 1));

  const DenseMatrix Q = q_matrix(fr);
  auto tangency = [&](const FieldLayout& l) { return pointwise_rows(l, dotrow(fr.n)); };
  auto sandwich = [&](const FieldLayout& l) {
    SparseMatrix a = pointwise_rows(l, vmap_vec_mat(fr.n));  // n'M
    SparseMatrix b = pointwise_rows(l, vmap_mat_vec(fr.n));  // M n
    return vstack(a, b);
  };
  auto ident1 = [](const CtEdge&) { return ident_c(1); };
  auto ident3 = [](const CtEdge&) { return ident_c(3); };
  auto ident9 = [](const CtEdge&) { return ident_c(9); };

  if (name == "V2") return free_space(d, lay(r, 1));
  if (name == "V2r") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {moment_rows(l, {field_from_polys(lay(0, 1), {Poly::constant(Rational(1))})})});
  }
  if (name == "L0") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {face_edge_rows(l, ident1)});
  }
  if (name == "L0r") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {face_edge_rows(l, ident1), face_bdry_rows(l, [](int) { return ident_c(1); })});
  }
  if (name == "L2r") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l,
                      {face_edge_rows(l, ident1), face_bdry_rows(l, [](int) { return ident_c(1); }),
                       moment_rows(l, {field_from_polys(lay(0, 1), {Poly::constant(Rational(1))})})});
  }
  if (name == "L1" || name == "L1r") {
    FieldLayout l = lay(r, 3);
    std::vector<SparseMatrix> blocks{tangency(l), face_edge_rows(l, ident3)};
    if (name == "L1r") blocks.push_back(face_bdry_rows(l, [](int) { return ident_c(3); }));
    return make_space(d, l, blocks);
  }
  if (name == "V1div" || name == "V1divr") {
    FieldLayout l = lay(r, 3);
    std::vector<SparseMatrix> blocks{tangency(l),
                                     face_edge_rows(l, [&](const CtEdge& e) { return dotrow(e.s_raw); })};
    if (name == "V1divr")
      blocks.push_back(face_bdry_rows(l, [&](int tri) {
        Vec3 t = boundary_edge_tangent(sc, face, tri);
        return dotrow(cross(fr.n, t));
      }));
    return make_space(d, l, blocks);
  }
  if (name == "V1curl" || name == "V1curlr") {
    FieldLayout l = lay(r, 3);
    std::vector<SparseMatrix> blocks{tangency(l),
                                     face_edge_rows(l, [&](const CtEdge& e) { return dotrow(e.t_raw); })};
    if (name == "V1curlr")
      blocks.push_back(
          face_bdry_rows(l, [&](int tri) { return dotrow(boundary_edge_tangent(sc, face, tri)); }));
    return make_space(d, l, blocks);
  }
  if (name == "S0" || name == "S0r" || name == "R0") {
    FieldLayout l = lay(r, 1);
    LinearMap g = op_gradF_scalar(l);
    std::vector<SparseMatrix> blocks{face_edge_rows(l, ident1), face_edge_rows(g.dst, ident3) * g.m};
    if (name == "S0r") {
      blocks.push_back(face_bdry_rows(l, [](int) { return ident_c(1); }));
      blocks.push_back(face_bdry_rows(g.dst, [](int) { return ident_c(3); }) * g.m);
    }
    if (name == "R0") blocks.push_back(face_bdry_rows(l, [](int) { return ident_c(1); }));
    return make_space(d, l, blocks);
  }
  if (name == "S1") {
    FieldLayout l = lay(r, 3);
    LinearMap c = op_curlF_vec(l);
    return make_space(d, l, {tangency(l), face_edge_rows(l, ident3), face_edge_rows(c.dst, ident1) * c.m});
  }
  if (name == "Q1" || name == "Q1t") {
    FieldLayout l = lay(r, 9);
    LinearMap skew = op_skew_mat(l);
    std::vector<SparseMatrix> blocks{sandwich(l), skew.m};
    if (name == "Q1")
      blocks.push_back(face_edge_rows(l, [&](const CtEdge& e) { return Q * vmap_mat_vec(e.s_raw); }));
    else
      blocks.push_back(face_edge_rows(l, ident9));
    return make_space(d, l, blocks);
  }
  if (name == "Qinc1r") {
    FieldLayout l = lay(r, 9);
    LinearMap c = op_curlF_mat(l);
    std::vector<SparseMatrix> blocks{
        sandwich(l), face_edge_rows(l, ident9), face_bdry_rows(l, [](int) { return ident_c(9); }),
        face_edge_rows(c.dst, [&](const CtEdge& e) { return dotrow(e.t_raw); }) * c.m,
        face_bdry_rows(c.dst, [&](int tri) { return dotrow(boundary_edge_tangent(sc, face, tri)); }) * c.m};
    return make_space(d, l, blocks);
  }
  if (name == "Qinc1sr") {
    const FESpace& base = face_space("Qinc1r", r, face);
    LinearMap sym = value_op(base.layout, 9, vmap_sym());
    return image_space(name, sym, base);
  }
  if (name == "Q2r") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {moment_rows(l, face_p1_fields(lay(1, 1)))});
  }
  if (name == "P1") {
    return span_space(d, lay(r, 1), face_p1_fields(lay(r, 1)));
  }
  if (name == "RF") {
    return span_space(d, lay(r, 3), face_rigid_fields(lay(r, 3)));
  }
  if (name == "VcurlV2r") {
    // ring V1curl intersected with (ring V2 (x) V2): tangential fields with
    // continuous t_e components, vanishing boundary tangential trace, and
    // zero componentwise mean.
    FieldLayout l = lay(r, 3);
    std::vector<PiecewiseField> consts;
    for (int k = 0; k < 3; ++k) {
      std::vector<Poly> c(3, Poly::constant(Rational(0)));
      c[k] = Poly::constant(Rational(1));
      consts.push_back(field_from_polys(lay(0, 3), c));
    }
    return make_space(d, l,
                      {tangency(l), face_edge_rows(l, [&](const CtEdge& e) { return dotrow(e.t_raw); }),
                       face_bdry_rows(l, [&](int tri) { return dotrow(boundary_edge_tangent(sc, face, tri)); }),
                       moment_rows(l, consts)});
  }
  if (name == "Qperp") {
    const FESpace& q1 = face_space("Q1", r, face);
    const FESpace& q1t = face_space("Q1t", r, face);
    DenseMatrix G = mass_matrix(q1.layout).dense();
    FESpace s;
    s.desc = d;
    s.layout = q1.layout;
    s.image_form = true;
    s.basis = gram_complement(q1t.basis, q1.basis, G);
    s.dim = s.basis.cols;
    if (s.dim != q1.dim - q1t.dim) throw std::logic_error("Qperp: dimension mismatch");
    return s;
  }
  throw std::invalid_argument("unknown face space '" + name + "'");
}

// ---------------------------------------------------------------------------
// 3D catalog

FESpace SpaceCache::build_tet(const std::string& name, int r, int /*tet*/) {
  const SplitComplex& sc = *sc_;
  auto lay = [&](int deg, int nc) { return volume_layout(sc, deg, nc); };
  SpaceDescriptor d{name, r, -1};
  std::vector<int> all_faces;
  for (int f = 0; f < static_cast<int>(sc.faces.size()); ++f) all_faces.push_back(f);

  if (r < 0) {
    int nc = 1;
    if (name[0] == 'V' && name[1] != '3') nc = 3;
    if (name == "L1" || name == "L1r" || name == "S1" || name == "S1r" || name == "S2" || name == "S2r" ||
        name == "cV2" || name == "cV2r" || name == "U3" || name == "U3r" || name == "R")
      nc = 3;
    if (name[0] == 'U' && name[1] != '3') nc = 9;
    return null_space(d, lay(0, nc));
  }

  auto if_ident = [](int k) {
    return [k](const Interface&) { return ident_c(k); };
  };
  auto bd_ident = [](int k) {
    return [k](const MacroFace&) { return ident_c(k); };
  };
  auto mean_zero = [&](const FieldLayout& l) {
    return moment_rows(l, {field_from_polys(lay(0, 1), {Poly::constant(Rational(1))})});
  };

  if (name == "L0" || name == "S3") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {iface_rows(l, if_ident(1))});
  }
  if (name == "L0r") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {iface_rows(l, if_ident(1)), bdry_rows(l, all_faces, bd_ident(1))});
  }
  if (name == "S3r") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {iface_rows(l, if_ident(1)), bdry_rows(l, all_faces, bd_ident(1)), mean_zero(l)});
  }
  if (name == "L1") return tensor_to_vector(name, tet_space("L0", r));
  if (name == "L1r") return tensor_to_vector(name, tet_space("L0r", r));
  if (name == "V1" || name == "V1r") {
    FieldLayout l = lay(r, 3);
    std::vector<SparseMatrix> blocks{iface_rows(l, [](const Interface& f) { return q_of(f.n_raw); })};
    if (name == "V1r")
      blocks.push_back(bdry_rows(l, all_faces, [](const MacroFace& mf) { return q_matrix(mf.frame); }));
    return make_space(d, l, blocks);
  }
  if (name == "V2" || name == "V2r") {
    FieldLayout l = lay(r, 3);
    std::vector<SparseMatrix> blocks{iface_rows(l, [](const Interface& f) { return dotrow(f.n_raw); })};
    if (name == "V2r")
      blocks.push_back(bdry_rows(l, all_faces, [](const MacroFace& mf) { return dotrow(mf.frame.n); }));
    return make_space(d, l, blocks);
  }
  if (name == "V3") return free_space(d, lay(r, 1));
  if (name == "V3r") {
    FieldLayout l = lay(r, 1);
    return make_space(d, l, {mean_zero(l)});
  }
  if (name == "S0" || name == "S0r") {
    FieldLayout l = lay(r, 1);
    LinearMap g = op_grad_scalar(l);
    std::vector<SparseMatrix> blocks{iface_rows(l, if_ident(1)), iface_rows(g.dst, if_ident(3)) * g.m};
    if (name == "S0r") {
      blocks.push_back(bdry_rows(l, all_faces, bd_ident(1)));
      blocks.push_back(bdry_rows(g.dst, all_faces, bd_ident(3)) * g.m);
    }
    return make_space(d, l, blocks);
  }
  if (name == "S1" || name == "S1r") {
    FieldLayout l = lay(r, 3);
    LinearMap c = op_curl_vec(l);
    std::vector<SparseMatrix> blocks{iface_rows(l, if_ident(3)), iface_rows(c.dst, if_ident(3)) * c.m};
    if (name == "S1r") {
      blocks.push_back(bdry_rows(l, all_faces, bd_ident(3)));
      blocks.push_back(bdry_rows(c.dst, all_faces, bd_ident(3)) * c.m);
    }
    return make_space(d, l, blocks);
  }
  if (name == "S2" || name == "S2r") {
    FieldLayout l = lay(r, 3);
    LinearMap dv = op_div_vec(l);
    std::vector<SparseMatrix> blocks{iface_rows(l, if_ident(3)), iface_rows(dv.dst, if_ident(1)) * dv.m};
    if (name == "S2r") {
      blocks.push_back(bdry_rows(l, all_faces, bd_ident(3)));
      blocks.push_back(bdry_rows(dv.dst, all_faces, bd_ident(1)) * dv.m);
    }
    return make_space(d, l, blocks);
  }
  if (name == "cV2" || name == "cV2r") {
    FieldLayout l = lay(r, 3);
    std::vector<SparseMatrix> blocks{
        iface_rows(l, [](const Interface& f) { return dotrow(f.n_raw); }),
        ct_edge_rows(l, all_faces, 0, [&](const CtEdge& e) { return q_matrix(sc.faces[e.face].frame); })};
    if (name == "cV2r")
      blocks.push_back(bdry_rows(l, all_faces, [](const MacroFace& mf) { return dotrow(mf.frame.n); }));
    return make_space(d, l, blocks);
  }
  if (name == "cV3" || name == "cV3r") {
    FieldLayout l = lay(r, 1);
    std::vector<SparseMatrix> blocks{ct_edge_rows(l, all_faces, 0, [](const CtEdge&) { return ident_c(1); })};
    if (name == "cV3r") blocks.push_back(mean_zero(l));
    return make_space(d, l, blocks);
  }
  if (name == "U0") return tensor_to_vector(name, tet_space("S0", r));
  if (name == "U0r") return tensor_to_vector(name, tet_space("S0r", r));
  if (name == "U1" || name == "U1r") {
    FESpace s1v = tensor_to_matrix(name + ":gen", tet_space(name == "U1" ? "S1" : "S1r", r));
    LinearMap sym = value_op(s1v.layout, 9, vmap_sym());
    return image_space(name, sym, s1v);
  }
  if (name == "U2" || name == "U2r") {
    FieldLayout l = lay(r, 9);
    std::vector<SparseMatrix> blocks{
        iface_rows(l, [](const Interface& f) { return vmap_mat_vec(f.n_raw); }),
        pointwise_rows(l, sym_rows3())};
    if (name == "U2r") {
      blocks.push_back(ct_edge_rows(l, all_faces, 0, [&](const CtEdge& e) {
        return vmap_right(q_matrix(sc.faces[e.face].frame));
      }));
      blocks.push_back(bdry_rows(l, all_faces, [](const MacroFace& mf) { return vmap_mat_vec(mf.frame.n); }));
    }
    return make_space(d, l, blocks);
  }
  if (name == "U3") return free_space(d, lay(r, 3));
  if (name == "U3r") {
    FieldLayout l = lay(r, 3);
    return make_space(d, l, {moment_rows(l, rigid_fields(lay(1, 3)))});
  }
  if (name == "R") {
    return span_space(d, lay(std::max(r, 1), 3), rigid_fields(lay(std::max(r, 1), 3)));
  }
  throw std::invalid_argument("unknown tet space '" + name + "'");
}

FESpace face_tensor_tangent(const std::string& name, const FESpace& scalar) {
  if (scalar.layout.ncomp != 1) throw std::invalid_argument("face_tensor_tangent: scalar space");
  const Frame& fr = layout_frame(scalar.layout);
  FESpace s;
  s.desc = {name, scalar.desc.r, scalar.desc.face};
  s.layout = scalar.layout;
  s.layout.ncomp = 3;
  s.image_form = true;
  s.dim = 2 * scalar.dim;
  s.basis = DenseMatrix(s.layout.size(), s.dim);
  const long nb = scalar.layout.nbern();
  const Vec3 b[2] = {fr.b1, fr.b2};
  for (long j = 0; j < scalar.dim; ++j)
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < static_cast<int>(scalar.layout.cells.size()); ++c)
        for (long q = 0; q < nb; ++q)
          for (int comp = 0; comp < 3; ++comp)
            s.basis.at(s.layout.index(c, q, comp), 2 * j + k) =
                b[k][comp] * scalar.basis.at(scalar.layout.index(c, q, 0), j);
  return s;
}

FESpace face_tensor_tangent_matrix(const std::string& name, const FESpace& vec) {
  if (vec.layout.ncomp != 3) throw std::invalid_argument("face_tensor_tangent_matrix: vector space");
  const Frame& fr = layout_frame(vec.layout);
  FESpace s;
  s.desc = {name, vec.desc.r, vec.desc.face};
  s.layout = vec.layout;
  s.layout.ncomp = 9;
  s.image_form = true;
  s.dim = 2 * vec.dim;
  s.basis = DenseMatrix(s.layout.size(), s.dim);
  const long nb = vec.layout.nbern();
  const Vec3 b[2] = {fr.b1, fr.b2};
  for (long j = 0; j < vec.dim; ++j)
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < static_cast<int>(vec.layout.cells.size()); ++c)
        for (long q = 0; q < nb; ++q)
          for (int row = 0; row < 3; ++row)
            for (int col = 0; col < 3; ++col)
              s.basis.at(s.layout.index(c, q, 3 * row + col), 2 * j + k) =
                  b[k][row] * vec.basis.at(vec.layout.index(c, q, col), j);
  return s;
}

// ---------------------------------------------------------------------------
// q_perp / characterization / projRigid

const FESpace& q_perp(SpaceCache& cache, int r, int face) { return cache.face_space("Qperp", r, face); }

std::vector<CheckRow> characterization_check(SpaceCache& cache, int r, bool ring) {
  std::vector<CheckRow> out;
  const SplitComplex& sc = cache.sc();
  const FESpace& img = cache.tet_space(ring ? "U1r" : "U1", r);

  // Constraint form: symmetric, H^1, (curl u)' in V^1_{r-1} (+ ring extras).
  FieldLayout l = volume_layout(sc, r, 9);
  std::vector<int> all_faces;
  for (int f = 0; f < static_cast<int>(sc.faces.size()); ++f) all_faces.push_back(f);
  LinearMap curl = op_curl_mat(l);
  std::vector<SparseMatrix> blocks{
      pointwise_rows(l, sym_rows3()), iface_rows(l, [](const Interface&) { return ident_c(9); }),
      iface_rows(curl.dst, [](const Interface& f) { return vmap_left(q_of(f.n_raw)); }) * curl.m};
  if (ring) {
    blocks.push_back(bdry_rows(l, all_faces, [](const MacroFace&) { return ident_c(9); }));
    blocks.push_back(
        bdry_rows(curl.dst, all_faces, [](const MacroFace& mf) { return vmap_left(q_matrix(mf.frame)); }) *
        curl.m);
    LinearMap inc = op_inc(l);
    blocks.push_back(iface_rows(inc.dst, [](const Interface& f) { return vmap_mat_vec(f.n_raw); }) * inc.m);
    blocks.push_back(ct_edge_rows(inc.dst, all_faces, 0, [&](const CtEdge& e) {
                       return vmap_right(q_matrix(sc.faces[e.face].frame));
                     }) *
                     inc.m);
    blocks.push_back(
        bdry_rows(inc.dst, all_faces, [](const MacroFace& mf) { return vmap_mat_vec(mf.frame.n); }) * inc.m);
  }
  FESpace con = make_space({ring ? "U1r:con" : "U1:con", r, -1}, l, std::move(blocks));

  auto add = [&](const std::string& n, const std::string& e, const std::string& g) {
    out.push_back({n, e, g, e == g});
  };
  add("dim(sym image)", std::to_string(con.dim), std::to_string(img.dim));
  // Equal span: rank of the concatenation stays the dimension.
  long rk = rank_of(from_dense(hcat(img.basis, con.basis)), RankMode::Auto).rank;
  add("rank[image|constraint]", std::to_string(con.dim), std::to_string(rk));
  // Inclusion direction (constructive in the paper): image satisfies the
  // constraints exactly.
  bool incl = is_zero(con.constraints * img.basis);
  out.push_back({"image satisfies constraints", "0", incl ? "0" : "nonzero", incl});
  return out;
}

std::vector<CheckRow> proj_rigid_check(SpaceCache& cache) {
  std::vector<CheckRow> out;
  const SplitComplex& sc = cache.sc();
  const FESpace& u3 = cache.tet_space("U3", 0);
  const FESpace& u3r = cache.tet_space("U3r", 0);

  // P_U (L^2 projection onto piecewise constant vectors) of a rigid field is
  // its value at the cell barycenter.
  FieldLayout l0 = volume_layout(sc, 0, 3);
  DenseMatrix pur(l0.size(), 6);
  auto rig = rigid_fields(volume_layout(sc, 1, 3));
  for (int k = 0; k < 6; ++k) {
    for (int c = 0; c < static_cast<int>(l0.cells.size()); ++c) {
      std::vector<Rational> lam(4, frac(1, 4));
      auto v = eval_at(rig[k], c, lam);
      for (int comp = 0; comp < 3; ++comp) pur.at(l0.index(c, 0, comp), k) = v[comp];
    }
  }
  long rk = rank_of(pur, RankMode::Exact).rank;
  out.push_back({"dim P_U R", "6", std::to_string(rk), rk == 6});
  long total = rank_of(hcat(pur, u3r.basis), RankMode::Exact).rank;
  out.push_back({"rank [P_U R | ring U3_0]", std::to_string(u3.dim), std::to_string(total),
                 total == u3.dim && u3.dim == 36});
  // P_U fixes constants.
  bool ok = true;
  for (int k = 0; k < 3; ++k)
    for (long i = 0; i < l0.size(); ++i) {
      Rational expect = (i % 3 == k) ? 1 : 0;
      ok = ok && (pur.at(i, k) == expect);
    }
  out.push_back({"P_U constants = constants", "true", ok ? "true" : "false", ok});
  return out;
}

// ---------------------------------------------------------------------------
// Dimension formulas

namespace {
long pos(long v) { return v > 0 ? v : 0; }
}  // namespace

DimFormula table1_dim(const std::string& row, int k, int r) {
  if (r < 1) return {0, false};
  long R = r;
  if (row == "V") {
    if (k == 0) return {(3 * R * R + 3 * R + 2) / 2, true};
    if (k == 1) return {3 * (R + 1) * (R + 1), true};
    if (k == 2) return {3 * (R + 1) * (R + 2) / 2, true};
  } else if (row == "Vr") {
    if (k == 0) return {(3 * R * R - 3 * R + 2) / 2, true};
    if (k == 1) return {3 * R * (R + 1), true};
    if (k == 2) return {3 * (R + 1) * (R + 2) / 2 - 1, true};
  } else if (row == "L") {
    if (k == 0 || k == 2) return {(3 * R * R + 3 * R + 2) / 2, true};
    if (k == 1) return {3 * R * R + 3 * R + 2, true};
  } else if (row == "Lr") {
    if (k == 0) return {(3 * R * R - 3 * R + 2) / 2, true};
    if (k == 1) return {3 * R * R - 3 * R + 2, true};
    if (k == 2) return {3 * R * (R - 1) / 2, true};
  } else if (row == "S") {
    if (k == 0) return {3 * (R * R - R + 2) / 2, true};
    if (k == 1) return {3 * R * R + 3, true};
    if (k == 2) return {(3 * R * R + 3 * R + 2) / 2, true};
  } else if (row == "R0") {
    if (k == 0) return {3 * (R - 1) * (R - 2) / 2, true};
  } else if (row == "Q1") {
    if (k == 1) return {3 * (3 * R * R + 5 * R + 2) / 2, true};
  }
  return {0, false};
}

DimFormula table2_dim(const std::string& row, int k, int r) {
  long R = r;
  if (row == "V" || row == "L") {
    if (r < 1) return {0, false};
  } else if (row == "Vr" || row == "Lr" || row == "cVr") {
    if (r < 1) return {0, false};
  } else if (row == "S" || row == "Sr") {
    if (r < 2) return {0, false};
  }
  if (row == "V") {
    if (k == 0) return {(2 * R + 1) * (R * R + R + 1), true};
    if (k == 1) return {2 * (R + 1) * (3 * R * R + 6 * R + 4), true};
    if (k == 2) return {3 * (R + 1) * (R + 2) * (2 * R + 3), true};
    if (k == 3) return {2 * (R + 1) * (R + 2) * (R + 3), true};
  } else if (row == "Vr") {
    if (k == 0) return {(2 * R - 1) * (R * R - R + 1), true};
    if (k == 1) return {2 * (R + 1) * (3 * R * R + 1), true};
    if (k == 2) return {3 * (R + 1) * (R + 2) * (2 * R + 1), true};
    if (k == 3) return {2 * R * R * R + 12 * R * R + 22 * R + 11, true};
  } else if (row == "L") {
    long base = (2 * R + 1) * (R * R + R + 1);
    if (k == 0 || k == 3) return {base, true};
    if (k == 1 || k == 2) return {3 * base, true};
  } else if (row == "Lr") {
    long base = (2 * R - 1) * (R * R - R + 1);
    if (k == 0) return {base, true};
    if (k == 1 || k == 2) return {3 * base, true};
    if (k == 3) return {(R - 1) * (2 * R * R - R + 2), true};
  } else if (row == "cVr") {
    if (k == 2) return {6 * R * R * R + 21 * R * R + 9 * R + 2, true};
    if (k == 3) return {2 * R * R * R + 12 * R * R + 10 * R + 3, true};
  } else if (row == "S") {
    if (k == 0) return {2 * R * R * R - 6 * R * R + 10 * R - 2, true};
    if (k == 1) return {3 * R * (2 * R * R - 3 * R + 5), true};
    if (k == 2) return {6 * R * R * R + 8 * R + 2, true};
    if (k == 3) return {(2 * R + 1) * (R * R + R + 1), true};
  } else if (row == "Sr") {
    if (k == 0) return {pos(2 * (R - 2) * (R - 3) * (R - 4)), true};
    if (k == 1) return {pos(3 * (2 * R - 3) * (R - 2) * (R - 3)), true};
    if (k == 2) return {pos(2 * (R - 2) * (3 * R * R - 6 * R + 4)), true};
    if (k == 3) return {(R - 1) * (2 * R * R - R + 2), true};
  }
  return {0, false};
}

DimFormula u_dim(int k, int r, bool ring) {
  if (r < 3) return {0, false};
  long R = r;
  if (!ring) {
    if (k == 0) return {6 * R * R * R + 12 * R + 12, true};
    if (k == 1) return {12 * R * R * R - 9 * R * R + 15 * R + 6, true};
    if (k == 2) return {12 * R * R * R - 27 * R * R + 15 * R, true};
    if (k == 3) return {6 * R * R * R - 18 * R * R + 12 * R, true};
  } else {
    if (k == 0) return {6 * R * R * R - 36 * R * R + 66 * R - 36, true};
    if (k == 1) return {12 * R * R * R - 63 * R * R + 87 * R - 18, true};
    if (k == 2) return {12 * R * R * R - 45 * R * R + 33 * R + 12, true};
    if (k == 3) return {6 * R * R * R - 18 * R * R + 12 * R - 6, true};
  }
  return {0, false};
}

TableEntry table1_space(const std::string& row, int k, int r) {
  if (row == "V") return {k == 0 ? "L0" : (k == 1 ? "V1div" : "V2"), r};
  if (row == "Vr") return {k == 0 ? "L0r" : (k == 1 ? "V1divr" : "V2r"), r};
  if (row == "L") return {k == 1 ? "L1" : "L0", r};
  if (row == "Lr") return {k == 0 ? "L0r" : (k == 1 ? "L1r" : "L2r"), r};
  if (row == "S") return {k == 0 ? "S0" : (k == 1 ? "S1" : "L0"), r};
  if (row == "R0") return {"R0", r};
  if (row == "Q1") return {"Q1", r};
  throw std::invalid_argument("table1_space: bad row");
}

TableEntry table2_space(const std::string& row, int k, int r) {
  static const char* vnames[4] = {"L0", "V1", "V2", "V3"};
  static const char* vrnames[4] = {"L0r", "V1r", "V2r", "V3r"};
  static const char* snames[4] = {"S0", "S1", "S2", "S3"};
  static const char* srnames[4] = {"S0r", "S1r", "S2r", "S3r"};
  if (row == "V") return {vnames[k], r};
  if (row == "Vr") return {vrnames[k], r};
  if (row == "L") return {(k == 1 || k == 2) ? "L1" : "L0", r};
  if (row == "Lr") return {k == 0 ? "L0r" : ((k == 1 || k == 2) ? "L1r" : "S3r"), r};
  if (row == "cVr") return {k == 2 ? "cV2r" : "cV3r", r};
  if (row == "S") return {snames[k], r};
  if (row == "Sr") return {srnames[k], r};
  throw std::invalid_argument("table2_space: bad row");
}

TableEntry u_space(int k, int r, bool ring) {
  static const char* names[4] = {"U0", "U1", "U2", "U3"};
  const int deg[4] = {r + 1, r, r - 2, r - 3};
  std::string n = names[k];
  if (ring) n += "r";
  return {n, deg[k]};
}

}  // namespace wfela
