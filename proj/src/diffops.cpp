#include "wfela/diffops.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace wfela {

LinearMap compose(const LinearMap& a, const LinearMap& b) {
  if (!a.src.compatible(b.dst)) throw std::invalid_argument("compose: shape mismatch");
  return {b.src, a.dst, a.m * b.m};
}

LinearMap lm_sub(const LinearMap& a, const LinearMap& b) {
  if (!a.src.compatible(b.src) || !a.dst.compatible(b.dst)) throw std::invalid_argument("lm_sub: shape mismatch");
  return {a.src, a.dst, a.m - b.m};
}

LinearMap lm_scale(const Rational& c, const LinearMap& a) { return {a.src, a.dst, scale(c, a.m)}; }

std::vector<Rational> apply(const LinearMap& a, const PiecewiseField& f) {
  if (!a.src.compatible(f.layout)) throw std::invalid_argument("apply: layout mismatch");
  return mul(a.m, f.coef);
}

PiecewiseField apply_field(const LinearMap& a, const PiecewiseField& f) {
  PiecewiseField g(a.dst);
  g.coef = apply(a, f);
  return g;
}

// ---------------------------------------------------------------------------
// Value maps

LinearMap value_op(const FieldLayout& src, int ncomp_out, const DenseMatrix& V) {
  if (V.rows != ncomp_out || V.cols != src.ncomp) throw std::invalid_argument("value_op: bad value matrix");
  FieldLayout dst = src;
  dst.ncomp = ncomp_out;
  SparseMatrix M(dst.size(), src.size());
  const long nb = src.nbern();
  for (int c = 0; c < static_cast<int>(src.cells.size()); ++c)
    for (long k = 0; k < nb; ++k)
      for (int i = 0; i < ncomp_out; ++i)
        for (int j = 0; j < src.ncomp; ++j)
          if (V.at(i, j) != 0) M.add(dst.index(c, k, i), src.index(c, k, j), V.at(i, j));
  return {src, dst, std::move(M)};
}

DenseMatrix vmap_identity(int n) { return DenseMatrix::identity(n); }

namespace {
inline int mi(int i, int j) { return 3 * i + j; }
}  // namespace

DenseMatrix vmap_sym() {
  DenseMatrix V(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      V.at(mi(i, j), mi(i, j)) += frac(1, 2);
      V.at(mi(i, j), mi(j, i)) += frac(1, 2);
    }
  return V;
}

DenseMatrix vmap_skw() {
  DenseMatrix V(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      V.at(mi(i, j), mi(i, j)) += frac(1, 2);
      V.at(mi(i, j), mi(j, i)) -= frac(1, 2);
    }
  return V;
}

DenseMatrix vmap_tau() {
  DenseMatrix V(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) V.at(mi(i, j), mi(j, i)) = 1;
  return V;
}

DenseMatrix vmap_tr() {
  DenseMatrix V(1, 9);
  for (int i = 0; i < 3; ++i) V.at(0, mi(i, i)) = 1;
  return V;
}

DenseMatrix vmap_xi() {
  // Xi M = M' - tr(M) I
  DenseMatrix V = vmap_tau();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) V.at(mi(i, i), mi(k, k)) -= 1;
  return V;
}

DenseMatrix vmap_xi_inv() {
  // Xi^{-1} M = M' - tr(M)/2 I
  DenseMatrix V = vmap_tau();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) V.at(mi(i, i), mi(k, k)) -= frac(1, 2);
  return V;
}

DenseMatrix vmap_mskw() {
  DenseMatrix V(9, 3);
  V.at(mi(0, 1), 2) = -1;
  V.at(mi(0, 2), 1) = 1;
  V.at(mi(1, 0), 2) = 1;
  V.at(mi(1, 2), 0) = -1;
  V.at(mi(2, 0), 1) = -1;
  V.at(mi(2, 1), 0) = 1;
  return V;
}

DenseMatrix vmap_vskw() {
  DenseMatrix V(3, 9);
  V.at(0, mi(2, 1)) = frac(1, 2);
  V.at(0, mi(1, 2)) = frac(-1, 2);
  V.at(1, mi(0, 2)) = frac(1, 2);
  V.at(1, mi(2, 0)) = frac(-1, 2);
  V.at(2, mi(1, 0)) = frac(1, 2);
  V.at(2, mi(0, 1)) = frac(-1, 2);
  return V;
}

DenseMatrix vmap_cross(const Vec3& a) {
  DenseMatrix V(3, 3);
  V.at(0, 1) = -a[2];
  V.at(0, 2) = a[1];
  V.at(1, 0) = a[2];
  V.at(1, 2) = -a[0];
  V.at(2, 0) = -a[1];
  V.at(2, 1) = a[0];
  return V;
}

DenseMatrix vmap_cross_right(const Vec3& a) {
  DenseMatrix V = vmap_cross(a);
  for (auto& v : V.a) v = -v;
  return V;
}

DenseMatrix vmap_dot(const Vec3& a) {
  DenseMatrix V(1, 3);
  for (int i = 0; i < 3; ++i) V.at(0, i) = a[i];
  return V;
}

DenseMatrix vmap_scalar_times(const Vec3& a) {
  DenseMatrix V(3, 1);
  for (int i = 0; i < 3; ++i) V.at(i, 0) = a[i];
  return V;
}

DenseMatrix vmap_outer_left(const Vec3& a) {
  DenseMatrix V(9, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) V.at(mi(i, j), j) = a[i];
  return V;
}

DenseMatrix vmap_mat_vec(const Vec3& a) {
  DenseMatrix V(3, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) V.at(i, mi(i, j)) = a[j];
  return V;
}

DenseMatrix vmap_vec_mat(const Vec3& a) {
  DenseMatrix V(3, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) V.at(j, mi(i, j)) = a[i];
  return V;
}

DenseMatrix q_matrix(const Frame& fr) {
  DenseMatrix Q(3, 3);
  for (int i = 0; i < 3; ++i) {
    Q.at(i, i) = 1;
    for (int j = 0; j < 3; ++j) Q.at(i, j) -= fr.n[i] * fr.n[j] / fr.nn;
  }
  return Q;
}

DenseMatrix vmap_proj_Q(const Frame& fr) { return q_matrix(fr); }

DenseMatrix vmap_left(const DenseMatrix& A) {
  DenseMatrix V(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) V.at(mi(i, j), mi(k, j)) += A.at(i, k);
  return V;
}

DenseMatrix vmap_right(const DenseMatrix& A) {
  DenseMatrix V(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) V.at(mi(i, j), mi(i, k)) += A.at(k, j);
  return V;
}

DenseMatrix vmap_sandwich_QQ(const Frame& fr) {
  DenseMatrix Q = q_matrix(fr);
  DenseMatrix L = vmap_left(Q), R = vmap_right(Q);
  return L * R;
}

DenseMatrix mat3(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  DenseMatrix M(3, 3);
  for (int i = 0; i < 3; ++i) {
    M.at(i, 0) = c0[i];
    M.at(i, 1) = c1[i];
    M.at(i, 2) = c2[i];
  }
  return M;
}

DenseMatrix frobenius_with(const DenseMatrix& S) {
  DenseMatrix V(1, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) V.at(0, mi(i, j)) = S.at(i, j);
  return V;
}

// ---------------------------------------------------------------------------
// Differential operators

namespace {

/// Per-axis derivative of a single component index: helper building the
/// component-roled derivative operators uniformly.
LinearMap assemble_diff(const FieldLayout& s, int ncomp_out,
                        const std::vector<std::tuple<int, int, int, Rational>>& terms) {
  // term (out_comp, in_comp, axis, coeff): out[o] += coeff * d(in[i])/dx_axis
  FieldLayout dst = s;
  dst.degree = s.degree > 0 ? s.degree - 1 : 0;
  dst.ncomp = ncomp_out;
  SparseMatrix M(dst.size(), s.size());
  if (s.degree == 0) return {s, dst, std::move(M)};
  const int d = s.cells[0].dim;
  const int r = s.degree;
  const MultiIndexSet& hi = MultiIndexSet::get(d, r);
  const MultiIndexSet& lo = MultiIndexSet::get(d, r - 1);
  for (int c = 0; c < static_cast<int>(s.cells.size()); ++c) {
    const CellGeom& g = s.cells[c];
    for (long a = 0; a < hi.size(); ++a) {
      const auto& alpha = hi[a];
      for (int i = 0; i <= d; ++i) {
        if (alpha[i] == 0) continue;
        std::vector<int> beta = alpha;
        beta[i] -= 1;
        const long b = lo.find(beta);
        for (const auto& [oc, ic, axis, coeff] : terms) {
          const Rational v = coeff * Rational(r) * g.gradL[i][axis];
          if (v != 0) M.add(dst.index(c, b, oc), s.index(c, a, ic), v);
        }
      }
    }
  }
  return {s, dst, std::move(M)};
}

}  // namespace

LinearMap op_dirderiv(const FieldLayout& s, const Vec3& w) {
  std::vector<std::tuple<int, int, int, Rational>> t;
  for (int c = 0; c < s.ncomp; ++c)
    for (int a = 0; a < 3; ++a)
      if (w[a] != 0) t.push_back({c, c, a, w[a]});
  return assemble_diff(s, s.ncomp, t);
}

LinearMap op_grad_scalar(const FieldLayout& s) {
  if (s.ncomp != 1) throw std::invalid_argument("op_grad_scalar: scalar input");
  std::vector<std::tuple<int, int, int, Rational>> t;
  for (int a = 0; a < 3; ++a) t.push_back({a, 0, a, Rational(1)});
  return assemble_diff(s, 3, t);
}

LinearMap op_grad_vec(const FieldLayout& s) {
  if (s.ncomp != 3) throw std::invalid_argument("op_grad_vec: vector input");
  std::vector<std::tuple<int, int, int, Rational>> t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.push_back({mi(i, j), i, j, Rational(1)});
  return assemble_diff(s, 9, t);
}

LinearMap op_curl_vec(const FieldLayout& s) {
  if (s.ncomp != 3) throw std::invalid_argument("op_curl_vec: vector input");
  std::vector<std::tuple<int, int, int, Rational>> t{
      {0, 2, 1, Rational(1)}, {0, 1, 2, Rational(-1)}, {1, 0, 2, Rational(1)},
      {1, 2, 0, Rational(-1)}, {2, 1, 0, Rational(1)}, {2, 0, 1, Rational(-1)}};
  return assemble_diff(s, 3, t);
}

LinearMap op_curl_mat(const FieldLayout& s) {
  if (s.ncomp != 9) throw std::invalid_argument("op_curl_mat: matrix input");
  std::vector<std::tuple<int, int, int, Rational>> t;
  for (int row = 0; row < 3; ++row) {
    t.push_back({mi(row, 0), mi(row, 2), 1, Rational(1)});
    t.push_back({mi(row, 0), mi(row, 1), 2, Rational(-1)});
    t.push_back({mi(row, 1), mi(row, 0), 2, Rational(1)});
    t.push_back({mi(row, 1), mi(row, 2), 0, Rational(-1)});
    t.push_back({mi(row, 2), mi(row, 1), 0, Rational(1)});
    t.push_back({mi(row, 2), mi(row, 0), 1, Rational(-1)});
  }
  return assemble_diff(s, 9, t);
}

LinearMap op_div_vec(const FieldLayout& s) {
  if (s.ncomp != 3) throw std::invalid_argument("op_div_vec: vector input");
  std::vector<std::tuple<int, int, int, Rational>> t;
  for (int a = 0; a < 3; ++a) t.push_back({0, a, a, Rational(1)});
  return assemble_diff(s, 1, t);
}

LinearMap op_div_mat(const FieldLayout& s) {
  if (s.ncomp != 9) throw std::invalid_argument("op_div_mat: matrix input");
  std::vector<std::tuple<int, int, int, Rational>> t;
  for (int row = 0; row < 3; ++row)
    for (int a = 0; a < 3; ++a) t.push_back({row, mi(row, a), a, Rational(1)});
  return assemble_diff(s, 3, t);
}

LinearMap op_eps(const FieldLayout& s) {
  LinearMap g = op_grad_vec(s);
  LinearMap sym = value_op(g.dst, 9, vmap_sym());
  return compose(sym, g);
}

LinearMap op_inc(const FieldLayout& s) {
  LinearMap c1 = op_curl_mat(s);
  LinearMap tau = value_op(c1.dst, 9, vmap_tau());
  LinearMap c2 = op_curl_mat(tau.dst);
  return compose(c2, compose(tau, c1));
}

// ---------------------------------------------------------------------------
// Surface operators

const Frame& layout_frame(const FieldLayout& s) {
  if (s.kind != DomainKind::Face) throw std::invalid_argument("layout_frame: face layout required");
  return s.sc->faces[s.face].frame;
}

LinearMap op_gradF_scalar(const FieldLayout& s) { return op_grad_scalar(s); }

LinearMap op_gradF_vec(const FieldLayout& s) {
  // Tangential Jacobian (already (Dv)Q on a face layout).
  return op_grad_vec(s);
}

LinearMap op_rotF_scalar(const FieldLayout& s) {
  const Frame& fr = layout_frame(s);
  LinearMap g = op_grad_scalar(s);  // tangential gradient
  return compose(value_op(g.dst, 3, vmap_cross_right(fr.n)), g);
}

LinearMap op_divF_vec(const FieldLayout& s) { return op_div_vec(s); }

LinearMap op_curlF_vec(const FieldLayout& s) {
  const Frame& fr = layout_frame(s);
  LinearMap x = value_op(s, 3, vmap_cross_right(fr.n));
  return compose(op_div_vec(x.dst), x);
}

namespace {

/// Metric contraction sum_{ij} G^{ij} embed(b_i) . inner(slice_j(.)) used by the
/// row-structured surface operators.
LinearMap frame_contract(const FieldLayout& s, int ncomp_out,
                         const std::function<LinearMap(const Vec3&)>& slice,
                         const std::function<DenseMatrix(const Vec3&)>& embed) {
  const Frame& fr = layout_frame(s);
  const Rational det = fr.g11 * fr.g22 - fr.g12 * fr.g12;
  const Rational gi[2][2] = {{fr.g22 / det, -fr.g12 / det}, {-fr.g12 / det, fr.g11 / det}};
  const Vec3 b[2] = {fr.b1, fr.b2};
  LinearMap out;
  bool first = true;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (gi[i][j] == 0) continue;
      LinearMap sj = slice(b[j]);
      LinearMap e = value_op(sj.dst, ncomp_out, embed(b[i]));
      LinearMap term = lm_scale(gi[i][j], compose(e, sj));
      out = first ? term : LinearMap{out.src, out.dst, out.m + term.m};
      first = false;
    }
  }
  return out;
}

}  // namespace

LinearMap op_rotF_row(const FieldLayout& s) {
  // q (tangent vector, standing for the row field q') -> sum t_i (rotF(q.t_i))'.
  return frame_contract(
      s, 9,
      [&](const Vec3& bj) {
        LinearMap d = value_op(s, 1, vmap_dot(bj));
        return compose(op_rotF_scalar(d.dst), d);
      },
      [&](const Vec3& bi) { return vmap_outer_left(bi); });
}

LinearMap op_curlF_mat(const FieldLayout& s) {
  // u -> vector c with c' = curl_F u_FF; slice row j: Q u' b_j.
  const Frame& fr = layout_frame(s);
  DenseMatrix Q = q_matrix(fr);
  return frame_contract(
      s, 3,
      [&](const Vec3& bj) {
        LinearMap sl = value_op(s, 3, Q * vmap_vec_mat(bj));
        return compose(op_curlF_vec(sl.dst), sl);
      },
      [&](const Vec3& bi) { return vmap_scalar_times(bi); });
}

LinearMap op_divF_mat(const FieldLayout& s) {
  const Frame& fr = layout_frame(s);
  DenseMatrix Q = q_matrix(fr);
  return frame_contract(
      s, 3,
      [&](const Vec3& bj) {
        LinearMap sl = value_op(s, 3, Q * vmap_vec_mat(bj));
        return compose(op_divF_vec(sl.dst), sl);
      },
      [&](const Vec3& bi) { return vmap_scalar_times(bi); });
}

LinearMap op_epsF(const FieldLayout& s) {
  LinearMap g = op_gradF_vec(s);
  return compose(value_op(g.dst, 9, vmap_sym()), g);
}

LinearMap op_airyF(const FieldLayout& s) {
  LinearMap r1 = op_rotF_scalar(s);
  return compose(op_rotF_row(r1.dst), r1);
}

LinearMap op_incF(const FieldLayout& s) {
  LinearMap c1 = op_curlF_mat(s);
  return compose(op_curlF_vec(c1.dst), c1);
}

LinearMap op_skew_scalar(const FieldLayout& s) {
  const Frame& fr = layout_frame(s);
  DenseMatrix M = vmap_mskw() * vmap_scalar_times(fr.n);  // 1 -> 9 : phi mskw(n)
  for (auto& v : M.a) v = -v;
  return value_op(s, 9, M);
}

LinearMap op_skew_mat(const FieldLayout& s) {
  const Frame& fr = layout_frame(s);
  // M -> -tr(mskw(n) M)
  DenseMatrix V(1, 9);
  DenseMatrix mn(3, 3);
  mn.at(0, 1) = -fr.n[2];
  mn.at(0, 2) = fr.n[1];
  mn.at(1, 0) = fr.n[2];
  mn.at(1, 2) = -fr.n[0];
  mn.at(2, 0) = -fr.n[1];
  mn.at(2, 1) = fr.n[0];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) V.at(0, mi(j, i)) -= mn.at(i, j);  // tr(mn*M) = sum mn_ij M_ji
  return value_op(s, 1, V);
}

LinearMap op_perp(const FieldLayout& s) {
  const Frame& fr = layout_frame(s);
  return value_op(s, 3, vmap_cross_right(fr.n));
}

// ---------------------------------------------------------------------------
// Traces

LinearMap trace_to_face(const FieldLayout& vol, int face, int side) {
  const SplitComplex& sc = *vol.sc;
  FieldLayout dst = face_layout(sc, face, vol.degree, vol.ncomp);
  SparseMatrix M(dst.size(), vol.size());
  const MacroFace& mf = sc.faces[face];
  for (int k = 0; k < 3; ++k) {
    const int cell = mf.tris[k].cell[side];
    if (cell < 0) throw std::invalid_argument("trace_to_face: no cell on requested side");
    std::vector<long> sub(mf.tris[k].pts.begin(), mf.tris[k].pts.end());
    for (const auto& [sb, src] : trace_pairs(vol.degree, vol.cells[cell].pts, sub))
      for (int c = 0; c < vol.ncomp; ++c) M.add(dst.index(k, sb, c), vol.index(cell, src, c), Rational(1));
  }
  return {vol, dst, std::move(M)};
}

LinearMap trace_to_edge(const FieldLayout& vol, long pa, long pb) {
  const SplitComplex& sc = *vol.sc;
  FieldLayout dst = edge_layout(sc, pa, pb, vol.degree, vol.ncomp);
  SparseMatrix M(dst.size(), vol.size());
  const long a = std::min(pa, pb), b = std::max(pa, pb);
  int cell = -1;
  for (int c = 0; c < static_cast<int>(vol.cells.size()) && cell < 0; ++c) {
    const auto& p = vol.cells[c].pts;
    if (std::find(p.begin(), p.end(), a) != p.end() && std::find(p.begin(), p.end(), b) != p.end()) cell = c;
  }
  if (cell < 0) throw std::invalid_argument("trace_to_edge: edge not found in any cell");
  for (const auto& [sb, src] : trace_pairs(vol.degree, vol.cells[cell].pts, {a, b}))
    for (int c = 0; c < vol.ncomp; ++c) M.add(dst.index(0, sb, c), vol.index(cell, src, c), Rational(1));
  return {vol, dst, std::move(M)};
}

LinearMap face_trace_to_boundary_edge(const FieldLayout& facelay, int bedge) {
  const SplitComplex& sc = *facelay.sc;
  const MacroFace& mf = sc.faces[facelay.face];
  // Boundary edge of CT triangle `bedge`: the two macro vertices of the tri.
  std::vector<long> mv;
  for (long p : mf.tris[bedge].pts)
    if (p != mf.m_point) mv.push_back(p);
  FieldLayout dst = edge_layout(sc, mv[0], mv[1], facelay.degree, facelay.ncomp);
  SparseMatrix M(dst.size(), facelay.size());
  std::vector<long> cellpts(mf.tris[bedge].pts.begin(), mf.tris[bedge].pts.end());
  for (const auto& [sb, src] : trace_pairs(facelay.degree, cellpts, mv))
    for (int c = 0; c < facelay.ncomp; ++c) M.add(dst.index(0, sb, c), facelay.index(bedge, src, c), Rational(1));
  return {facelay, dst, std::move(M)};
}

Vec3 boundary_edge_tangent(const SplitComplex& sc, int face, int bedge) {
  const MacroFace& mf = sc.faces[face];
  std::vector<long> mv;
  for (long p : mf.tris[bedge].pts)
    if (p != mf.m_point) mv.push_back(p);
  const Vec3 a = sc.points[mv[0]], b = sc.points[mv[1]];
  Vec3 t = b - a;
  // Positive orientation w.r.t. the frame normal: n x (outward conormal)
  // points along the traversal; equivalently cross(n, c - edge) tells the side.
  const Vec3 m = sc.points[mf.m_point];
  // The interior of F lies left of the edge when walking along t with n up:
  // require dot(cross(n, t), m - a) > 0, else flip.
  if (sgn(dot(cross(mf.frame.n, t), m - a)) < 0) t = Rational(-1) * t;
  return t;
}

}  // namespace wfela
