#include "wfela/bernstein.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <stdexcept>

namespace wfela {

// ---------------------------------------------------------------------------
// Multi-indices

MultiIndexSet::MultiIndexSet(int dim, int degree) : dim_(dim), degree_(degree) {
  std::vector<int> a(dim + 1, 0);
  // Lexicographically descending enumeration.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == dim) {
      a[pos] = left;
      idx_.push_back(a);
      return;
    }
    for (int v = left; v >= 0; --v) {
      a[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, degree);
  for (long k = 0; k < static_cast<long>(idx_.size()); ++k) lookup_[idx_[k]] = k;
}

const MultiIndexSet& MultiIndexSet::get(int dim, int degree) {
  static std::map<std::pair<int, int>, MultiIndexSet*> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, new MultiIndexSet(dim, degree)).first;
  return *it->second;
}

long MultiIndexSet::find(const std::vector<int>& alpha) const {
  auto it = lookup_.find(alpha);
  return it == lookup_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Layouts

namespace {

CellGeom tet_geom(const SplitComplex& sc, const std::array<long, 4>& pts) {
  CellGeom g;
  g.dim = 3;
  g.pts.assign(pts.begin(), pts.end());
  for (long p : pts) g.verts.push_back(sc.points[p]);
  const Vec3 e1 = g.verts[1] - g.verts[0], e2 = g.verts[2] - g.verts[0], e3 = g.verts[3] - g.verts[0];
  const Rational d = det3(e1, e2, e3);
  // Rows of the inverse Jacobian = gradients of lambda_1..3.
  const Vec3 c1 = cross(e2, e3), c2 = cross(e3, e1), c3 = cross(e1, e2);
  g.gradL.resize(4);
  g.gradL[1] = (1 / d) * c1;
  g.gradL[2] = (1 / d) * c2;
  g.gradL[3] = (1 / d) * c3;
  g.gradL[0] = Rational(-1) * (g.gradL[1] + g.gradL[2] + g.gradL[3]);
  Rational vol = d / 6;
  g.measure = sgn(vol) < 0 ? Rational(-vol) : vol;
  return g;
}

CellGeom tri_geom(const SplitComplex& sc, const std::array<long, 3>& pts, const Frame& frame) {
  CellGeom g;
  g.dim = 2;
  g.pts.assign(pts.begin(), pts.end());
  for (long p : pts) g.verts.push_back(sc.points[p]);
  const Vec3 e1 = g.verts[1] - g.verts[0], e2 = g.verts[2] - g.verts[0];
  const Rational g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
  const Rational det = g11 * g22 - g12 * g12;
  g.gradL.resize(3);
  g.gradL[1] = (g22 / det) * e1 - (g12 / det) * e2;
  g.gradL[2] = (g11 / det) * e2 - (g12 / det) * e1;
  g.gradL[0] = Rational(-1) * (g.gradL[1] + g.gradL[2]);
  Rational m = dot(cross(e1, e2), frame.n) / frame.nn;
  g.measure = sgn(m) < 0 ? Rational(-m) : m;
  return g;
}

CellGeom edge_geom(const SplitComplex& sc, long pa, long pb) {
  CellGeom g;
  g.dim = 1;
  g.pts = {pa, pb};
  g.verts = {sc.points[pa], sc.points[pb]};
  const Vec3 e = g.verts[1] - g.verts[0];
  g.gradL.resize(2);
  g.gradL[1] = (1 / dot(e, e)) * e;
  g.gradL[0] = Rational(-1) * g.gradL[1];
  g.measure = 1;
  return g;
}

}  // namespace

FieldLayout volume_layout(const SplitComplex& sc, int degree, int ncomp) {
  FieldLayout l;
  l.sc = &sc;
  l.kind = DomainKind::Volume;
  l.degree = degree;
  l.ncomp = ncomp;
  for (const auto& c : sc.cells) l.cells.push_back(tet_geom(sc, c.pts));
  return l;
}

FieldLayout face_layout(const SplitComplex& sc, int face, int degree, int ncomp) {
  FieldLayout l;
  l.sc = &sc;
  l.kind = DomainKind::Face;
  l.degree = degree;
  l.ncomp = ncomp;
  l.face = face;
  const MacroFace& mf = sc.faces[face];
  for (const auto& tri : mf.tris) l.cells.push_back(tri_geom(sc, tri.pts, mf.frame));
  return l;
}

FieldLayout edge_layout(const SplitComplex& sc, long pa, long pb, int degree, int ncomp) {
  FieldLayout l;
  l.sc = &sc;
  l.kind = DomainKind::Edge;
  l.degree = degree;
  l.ncomp = ncomp;
  l.cells.push_back(edge_geom(sc, std::min(pa, pb), std::max(pa, pb)));
  return l;
}

// ---------------------------------------------------------------------------
// Traces, derivatives, elevation

std::vector<std::pair<long, long>> trace_pairs(int degree, const std::vector<long>& cellpts,
                                               const std::vector<long>& subpts) {
  const int cd = static_cast<int>(cellpts.size()) - 1;
  const int sd = static_cast<int>(subpts.size()) - 1;
  std::vector<int> pos(subpts.size());
  for (size_t k = 0; k < subpts.size(); ++k) {
    auto it = std::find(cellpts.begin(), cellpts.end(), subpts[k]);
    if (it == cellpts.end()) throw std::invalid_argument("trace_pairs: sub-simplex not in cell closure");
    pos[k] = static_cast<int>(it - cellpts.begin());
  }
  const MultiIndexSet& sub = MultiIndexSet::get(sd, degree);
  const MultiIndexSet& cell = MultiIndexSet::get(cd, degree);
  std::vector<std::pair<long, long>> out;
  out.reserve(sub.size());
  for (long k = 0; k < sub.size(); ++k) {
    std::vector<int> alpha(cd + 1, 0);
    for (size_t j = 0; j < subpts.size(); ++j) alpha[pos[j]] = sub[k][j];
    out.push_back({k, cell.find(alpha)});
  }
  return out;
}

SparseMatrix deriv_matrix(const FieldLayout& src, const Vec3& dir) {
  if (src.degree == 0) {
    FieldLayout dst = src;
    dst.degree = 0;
    return SparseMatrix(src.size(), src.size());
  }
  const int d = src.cells[0].dim;
  const int r = src.degree;
  const MultiIndexSet& hi = MultiIndexSet::get(d, r);
  const MultiIndexSet& lo = MultiIndexSet::get(d, r - 1);
  FieldLayout dst = src;
  dst.degree = r - 1;
  SparseMatrix M(dst.size(), src.size());
  for (int c = 0; c < static_cast<int>(src.cells.size()); ++c) {
    const CellGeom& g = src.cells[c];
    std::vector<Rational> dl(d + 1);
    for (int i = 0; i <= d; ++i) dl[i] = dot(g.gradL[i], dir);
    for (long a = 0; a < hi.size(); ++a) {
      const auto& alpha = hi[a];
      for (int i = 0; i <= d; ++i) {
        if (alpha[i] == 0 || dl[i] == 0) continue;
        std::vector<int> beta = alpha;
        beta[i] -= 1;
        long b = lo.find(beta);
        for (int comp = 0; comp < src.ncomp; ++comp)
          M.add(dst.index(c, b, comp), src.index(c, a, comp), Rational(r) * dl[i]);
      }
    }
  }
  return M;
}

SparseMatrix elevation_matrix(const FieldLayout& src) {
  const int d = src.cells[0].dim;
  const int r = src.degree;
  const MultiIndexSet& lo = MultiIndexSet::get(d, r);
  const MultiIndexSet& hi = MultiIndexSet::get(d, r + 1);
  FieldLayout dst = src;
  dst.degree = r + 1;
  SparseMatrix M(dst.size(), src.size());
  for (int c = 0; c < static_cast<int>(src.cells.size()); ++c) {
    for (long b = 0; b < hi.size(); ++b) {
      const auto& beta = hi[b];
      for (int i = 0; i <= d; ++i) {
        if (beta[i] == 0) continue;
        std::vector<int> alpha = beta;
        alpha[i] -= 1;
        long a = lo.find(alpha);
        for (int comp = 0; comp < src.ncomp; ++comp)
          M.add(dst.index(c, b, comp), src.index(c, a, comp), frac(beta[i], r + 1));
      }
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Integration

namespace {

/// Integral of B_alpha^p * B_beta^q over the reference simplex of measure 1:
/// C(alpha+beta, alpha) / ( C(p+q, p) * C(p+q+d, d) ).
Rational pair_weight(const std::vector<int>& alpha, const std::vector<int>& beta, int p, int q, int d) {
  BigInt num = 1;
  for (size_t i = 0; i < alpha.size(); ++i) num *= binomial(alpha[i] + beta[i], alpha[i]);
  BigInt den = binomial(p + q, p) * binomial(p + q + d, d);
  return Rational(num) / Rational(den);
}

}  // namespace

Rational integrate_product(const PiecewiseField& a, const PiecewiseField& b) {
  const FieldLayout& la = a.layout;
  const FieldLayout& lb = b.layout;
  if (la.cells.size() != lb.cells.size() || la.ncomp != lb.ncomp)
    throw std::invalid_argument("integrate_product: incompatible layouts");
  const int d = la.cells[0].dim;
  const MultiIndexSet& A = MultiIndexSet::get(d, la.degree);
  const MultiIndexSet& B = MultiIndexSet::get(d, lb.degree);
  Rational total = 0;
  for (int c = 0; c < static_cast<int>(la.cells.size()); ++c) {
    Rational cellsum = 0;
    for (long i = 0; i < A.size(); ++i) {
      for (long j = 0; j < B.size(); ++j) {
        Rational dotc = 0;
        for (int comp = 0; comp < la.ncomp; ++comp) {
          const Rational& x = a.coef[la.index(c, i, comp)];
          const Rational& y = b.coef[lb.index(c, j, comp)];
          if (x != 0 && y != 0) dotc += x * y;
        }
        if (dotc != 0) cellsum += dotc * pair_weight(A[i], B[j], la.degree, lb.degree, d);
      }
    }
    total += cellsum * la.cells[c].measure;
  }
  return total;
}

Rational integrate(const PiecewiseField& a) {
  const FieldLayout& l = a.layout;
  if (l.ncomp != 1) throw std::invalid_argument("integrate: scalar fields only");
  const int d = l.cells[0].dim;
  const MultiIndexSet& A = MultiIndexSet::get(d, l.degree);
  const Rational w = Rational(1) / Rational(binomial(l.degree + d, d));
  Rational total = 0;
  for (int c = 0; c < static_cast<int>(l.cells.size()); ++c) {
    Rational s = 0;
    for (long i = 0; i < A.size(); ++i) s += a.coef[l.index(c, i, 0)];
    total += s * w * l.cells[c].measure;
  }
  return total;
}

SparseMatrix mass_matrix(const FieldLayout& l) {
  const int d = l.cells[0].dim;
  const MultiIndexSet& A = MultiIndexSet::get(d, l.degree);
  SparseMatrix M(l.size(), l.size());
  std::vector<std::vector<Rational>> w(A.size(), std::vector<Rational>(A.size()));
  for (long i = 0; i < A.size(); ++i)
    for (long j = 0; j < A.size(); ++j) w[i][j] = pair_weight(A[i], A[j], l.degree, l.degree, d);
  for (int c = 0; c < static_cast<int>(l.cells.size()); ++c)
    for (long i = 0; i < A.size(); ++i)
      for (long j = 0; j < A.size(); ++j) {
        if (w[i][j] == 0) continue;
        for (int comp = 0; comp < l.ncomp; ++comp)
          M.add(l.index(c, i, comp), l.index(c, j, comp), w[i][j] * l.cells[c].measure);
      }
  return M;
}

std::vector<Rational> eval_at(const PiecewiseField& f, int cell, const std::vector<Rational>& lambda) {
  const FieldLayout& l = f.layout;
  const int d = l.cells[cell].dim;
  const MultiIndexSet& A = MultiIndexSet::get(d, l.degree);
  std::vector<Rational> out(l.ncomp, Rational(0));
  for (long k = 0; k < A.size(); ++k) {
    const auto& alpha = A[k];
    BigInt mult = factorial(l.degree);
    Rational val(1);
    for (int i = 0; i <= d; ++i) {
      mult /= factorial(alpha[i]);
      for (int e = 0; e < alpha[i]; ++e) val *= lambda[i];
    }
    val *= Rational(mult);
    for (int comp = 0; comp < l.ncomp; ++comp) out[comp] += val * f.coef[l.index(cell, k, comp)];
  }
  return out;
}

PiecewiseField product(const PiecewiseField& a, const PiecewiseField& b) {
  const FieldLayout& la = a.layout;
  const FieldLayout& lb = b.layout;
  if (la.ncomp != 1 || lb.ncomp != 1 || la.cells.size() != lb.cells.size())
    throw std::invalid_argument("product: scalar fields on common cells only");
  const int d = la.cells[0].dim;
  const MultiIndexSet& A = MultiIndexSet::get(d, la.degree);
  const MultiIndexSet& B = MultiIndexSet::get(d, lb.degree);
  const MultiIndexSet& C = MultiIndexSet::get(d, la.degree + lb.degree);
  FieldLayout lc = la;
  lc.degree = la.degree + lb.degree;
  PiecewiseField out(lc);
  const Rational denom = Rational(binomial(la.degree + lb.degree, la.degree));
  for (int c = 0; c < static_cast<int>(la.cells.size()); ++c) {
    for (long i = 0; i < A.size(); ++i) {
      if (a.coef[la.index(c, i, 0)] == 0) continue;
      for (long j = 0; j < B.size(); ++j) {
        const Rational& y = b.coef[lb.index(c, j, 0)];
        if (y == 0) continue;
        std::vector<int> g(d + 1);
        BigInt num = 1;
        for (int k = 0; k <= d; ++k) {
          g[k] = A[i][k] + B[j][k];
          num *= binomial(g[k], A[i][k]);
        }
        out.coef[lc.index(c, C.find(g), 0)] += a.coef[la.index(c, i, 0)] * y * Rational(num) / denom;
      }
    }
  }
  return out;
}

std::vector<Rational> theta_eval(const PiecewiseField& vol_scalar, int ct_edge) {
  const FieldLayout& l = vol_scalar.layout;
  const SplitComplex& sc = *l.sc;
  if (l.kind != DomainKind::Volume || l.ncomp != 1) throw std::invalid_argument("theta_eval: scalar volume field");
  const JumpPairing jp = sc.theta_slots(ct_edge);
  const CtEdge& ce = sc.ct_edges[ct_edge];
  const std::vector<long> epts{std::min(ce.p_m, ce.p_v), std::max(ce.p_m, ce.p_v)};
  std::vector<Rational> out(l.degree + 1, Rational(0));
  const int sign_tri[2] = {+1, -1};   // Q1 minus Q2 ...
  const int sign_side[2] = {+1, -1};  // ... from side T1, reversed on side T2
  for (int side = 0; side < 2; ++side) {
    for (int which = 0; which < 2; ++which) {
      int cell = jp.cell_of[side][which];
      if (cell < 0) continue;
      const auto pairs = trace_pairs(l.degree, l.cells[cell].pts, epts);
      for (const auto& [sub, src] : pairs)
        out[sub] += Rational(sign_side[side] * sign_tri[which]) * vol_scalar.coef[l.index(cell, src, 0)];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomials

Poly Poly::constant(const Rational& c) {
  Poly p;
  if (c != 0) p.terms[{0, 0, 0}] = c;
  return p;
}

Poly Poly::var(int axis) {
  Poly p;
  std::array<int, 3> e{0, 0, 0};
  e[axis] = 1;
  p.terms[e] = 1;
  return p;
}

Poly Poly::deriv(int axis) const {
  Poly out;
  for (const auto& [e, c] : terms) {
    if (e[axis] == 0) continue;
    auto f = e;
    f[axis] -= 1;
    out.terms[f] += c * e[axis];
  }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = (it->second == 0) ? out.terms.erase(it) : std::next(it);
  return out;
}

Rational Poly::eval(const Vec3& p) const {
  Rational s = 0;
  for (const auto& [e, c] : terms) {
    Rational v = c;
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < e[a]; ++k) v *= p[a];
    s += v;
  }
  return s;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [e, c] : b.terms) {
    out.terms[e] += c;
    if (out.terms[e] == 0) out.terms.erase(e);
  }
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + Rational(-1) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [e, c] : a.terms)
    for (const auto& [f, d] : b.terms) {
      std::array<int, 3> g{e[0] + f[0], e[1] + f[1], e[2] + f[2]};
      out.terms[g] += c * d;
      if (out.terms[g] == 0) out.terms.erase(g);
    }
  return out;
}

Poly operator*(const Rational& c, const Poly& a) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [e, v] : a.terms) out.terms[e] = c * v;
  return out;
}

namespace {

using LambdaPoly = std::map<std::vector<int>, Rational>;  // exponents over d+1 barycentrics

LambdaPoly lp_mul(const LambdaPoly& a, const LambdaPoly& b) {
  LambdaPoly out;
  for (const auto& [e, c] : a)
    for (const auto& [f, d] : b) {
      std::vector<int> g(e.size());
      for (size_t i = 0; i < e.size(); ++i) g[i] = e[i] + f[i];
      out[g] += c * d;
    }
  return out;
}

}  // namespace

PiecewiseField field_from_polys(const FieldLayout& l, const std::vector<Poly>& comps) {
  if (static_cast<int>(comps.size()) != l.ncomp)
    throw std::invalid_argument("field_from_polys: component count mismatch");
  for (const auto& p : comps)
    if (p.degree() > l.degree) throw std::invalid_argument("field_from_polys: degree too high");
  PiecewiseField out(l);
  const int d = l.cells[0].dim;
  const int r = l.degree;
  const MultiIndexSet& A = MultiIndexSet::get(d, r);
  for (int c = 0; c < static_cast<int>(l.cells.size()); ++c) {
    const CellGeom& g = l.cells[c];
    // Coordinates as degree-1 lambda polynomials.
    std::vector<LambdaPoly> coord(3);
    LambdaPoly one;
    one[std::vector<int>(d + 1, 0)] = 1;
    for (int a = 0; a < 3; ++a) {
      for (int i = 0; i <= d; ++i) {
        if (g.verts[i][a] == 0) continue;
        std::vector<int> e(d + 1, 0);
        e[i] = 1;
        coord[a][e] += g.verts[i][a];
      }
    }
    LambdaPoly lamsum;
    for (int i = 0; i <= d; ++i) {
      std::vector<int> e(d + 1, 0);
      e[i] = 1;
      lamsum[e] = 1;
    }
    for (int comp = 0; comp < l.ncomp; ++comp) {
      LambdaPoly acc;
      for (const auto& [e, cf] : comps[comp].terms) {
        LambdaPoly t = one;
        for (int a = 0; a < 3; ++a)
          for (int k = 0; k < e[a]; ++k) t = lp_mul(t, coord[a]);
        // Homogenize to degree r with (sum lambda)^(r - deg).
        int deg = e[0] + e[1] + e[2];
        for (int k = 0; k < r - deg; ++k) t = lp_mul(t, lamsum);
        for (auto& [g2, v] : t) acc[g2] += cf * v;
      }
      for (const auto& [gexp, v] : acc) {
        if (v == 0) continue;
        std::vector<int> alpha(gexp.begin(), gexp.end());
        long k = A.find(alpha);
        // B_gamma^r = multinomial(r, gamma) * lambda^gamma.
        BigInt mult = factorial(r);
        for (int i = 0; i <= d; ++i) mult /= factorial(alpha[i]);
        out.coef[l.index(c, k, comp)] += v / Rational(mult);
      }
    }
  }
  return out;
}

Poly macro_barycentric(const SplitComplex& sc, int tet, int which) {
  const auto& T = sc.macro.tets[tet];
  std::array<Vec3, 4> v{sc.points[T[0]], sc.points[T[1]], sc.points[T[2]], sc.points[T[3]]};
  // lambda_which is affine: compute gradient and offset exactly.
  const Vec3 e1 = v[1] - v[0], e2 = v[2] - v[0], e3 = v[3] - v[0];
  const Rational d = det3(e1, e2, e3);
  std::array<Vec3, 4> grad;
  grad[1] = (1 / d) * cross(e2, e3);
  grad[2] = (1 / d) * cross(e3, e1);
  grad[3] = (1 / d) * cross(e1, e2);
  grad[0] = Rational(-1) * (grad[1] + grad[2] + grad[3]);
  Poly p = Poly::constant(which == 0 ? Rational(1) : Rational(0));
  for (int a = 0; a < 3; ++a) {
    p = p + grad[which][a] * (Poly::var(a) - Poly::constant(v[0][a]));
  }
  return p;
}

}  // namespace wfela
