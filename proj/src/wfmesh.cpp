#include "wfela/wfmesh.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wfela {

namespace {

std::string face_name(const std::array<int, 3>& f) {
  std::ostringstream os;
  os << "(" << f[0] << "," << f[1] << "," << f[2] << ")";
  return os.str();
}

Vec3 centroid4(const std::array<Vec3, 4>& v) {
  return frac(1, 4) * (v[0] + v[1] + v[2] + v[3]);
}

}  // namespace

void MacroMesh::validate() const {
  if (tets.empty()) throw std::runtime_error("mesh: no tets");
  for (size_t t = 0; t < tets.size(); ++t) {
    const auto& T = tets[t];
    for (int i : T)
      if (i < 0 || i >= static_cast<int>(vertices.size()))
        throw std::runtime_error("mesh: vertex index out of range in tet " + std::to_string(t));
    if (signed_volume6(vertices[T[0]], vertices[T[1]], vertices[T[2]], vertices[T[3]]) == 0)
      throw std::runtime_error("mesh: degenerate tet " + std::to_string(t));
  }
  // Face conformity: every sorted triple in at most two tets.
  std::map<std::array<int, 3>, int> count;
  for (const auto& T : tets) {
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> f;
      int m = 0;
      for (int i = 0; i < 4; ++i)
        if (i != k) f[m++] = T[i];
      std::sort(f.begin(), f.end());
      if (++count[f] > 2) throw std::runtime_error("mesh: face " + face_name(f) + " shared by >2 tets");
    }
  }
  // Face-connectedness.
  std::map<std::array<int, 3>, std::vector<int>> adj;
  for (size_t t = 0; t < tets.size(); ++t) {
    const auto& T = tets[t];
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> f;
      int m = 0;
      for (int i = 0; i < 4; ++i)
        if (i != k) f[m++] = T[i];
      std::sort(f.begin(), f.end());
      adj[f].push_back(static_cast<int>(t));
    }
  }
  std::vector<char> seen(tets.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    for (const auto& [f, ts] : adj) {
      if (ts.size() == 2 && (ts[0] == t || ts[1] == t)) {
        int o = ts[0] == t ? ts[1] : ts[0];
        if (!seen[o]) {
          seen[o] = 1;
          stack.push_back(o);
        }
      }
    }
  }
  for (size_t t = 0; t < tets.size(); ++t)
    if (!seen[t]) throw std::runtime_error("mesh: not face-connected");
}

IncenterResult incenter(const std::array<Vec3, 4>& tet) {
  if (signed_volume6(tet[0], tet[1], tet[2], tet[3]) == 0)
    throw std::invalid_argument("incenter: degenerate tetrahedron");
  // Face opposite vertex i; area^2 = |cross|^2 / 4.
  std::array<Rational, 4> area;  // twice the areas, kept raw
  bool exact = true;
  for (int i = 0; i < 4; ++i) {
    std::array<Vec3, 3> f;
    int m = 0;
    for (int j = 0; j < 4; ++j)
      if (j != i) f[m++] = tet[j];
    const Vec3 cr = cross(f[1] - f[0], f[2] - f[0]);
    Rational a;
    if (!exact_sqrt(dot(cr, cr), a)) {
      exact = false;
      break;
    }
    area[i] = a;
  }
  if (!exact) return {centroid4(tet), false};
  Rational total = area[0] + area[1] + area[2] + area[3];
  Vec3 p = area[0] * tet[0] + area[1] * tet[1] + area[2] * tet[2] + area[3] * tet[3];
  return {(1 / total) * p, true};
}

namespace {

struct FaceKey {
  std::array<int, 3> verts;
  bool operator<(const FaceKey& o) const { return verts < o.verts; }
};

}  // namespace

SplitComplex wf_split_global(const MacroMesh& mesh, const SplitOptions& opt) {
  mesh.validate();
  SplitComplex sc;
  sc.macro = mesh;
  sc.points = mesh.vertices;

  const int ntet = static_cast<int>(mesh.tets.size());

  // Interior split points z_T.
  sc.z_point.resize(ntet);
  sc.z_exact_incenter.resize(ntet);
  for (int t = 0; t < ntet; ++t) {
    const auto& T = mesh.tets[t];
    std::array<Vec3, 4> v{mesh.vertices[T[0]], mesh.vertices[T[1]], mesh.vertices[T[2]], mesh.vertices[T[3]]};
    Vec3 z;
    bool exact = false;
    if (t < static_cast<int>(mesh.interior_points.size()) && mesh.interior_points[t]) {
      z = *mesh.interior_points[t];
    } else {
      IncenterResult ic = incenter(v);
      z = ic.point;
      exact = ic.exact;
    }
    auto lam = barycentric_tet(v, z);
    for (const auto& l : lam)
      if (sgn(l) <= 0)
        throw std::runtime_error("split: interior point of tet " + std::to_string(t) + " not strictly interior");
    sc.z_point[t] = static_cast<long>(sc.points.size());
    sc.z_exact_incenter[t] = exact;
    sc.points.push_back(z);
  }

  // Macro faces with adjacency (tet order = ascending tet index).
  std::map<FaceKey, MacroFace> fmap;
  for (int t = 0; t < ntet; ++t) {
    const auto& T = mesh.tets[t];
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> f;
      int m = 0;
      for (int i = 0; i < 4; ++i)
        if (i != k) f[m++] = T[i];
      std::sort(f.begin(), f.end());
      auto& mf = fmap[FaceKey{f}];
      mf.verts = f;
      if (mf.tet[0] < 0)
        mf.tet[0] = t;
      else
        mf.tet[1] = t;
    }
  }

  // Face split points m_F.
  for (auto& [key, mf] : fmap) {
    const std::array<Vec3, 3> fv{mesh.vertices[mf.verts[0]], mesh.vertices[mf.verts[1]],
                                 mesh.vertices[mf.verts[2]]};
    Vec3 m;
    auto it = opt.face_points.find(mf.verts);
    if (it != opt.face_points.end()) {
      m = it->second;
    } else if (mf.interior()) {
      // m_F = [z_T1, z_T2] cut with the plane of F, validated.
      const Vec3 z1 = sc.points[sc.z_point[mf.tet[0]]];
      const Vec3 z2 = sc.points[sc.z_point[mf.tet[1]]];
      const Vec3 n = cross(fv[1] - fv[0], fv[2] - fv[0]);
      const Rational denom = dot(n, z2 - z1);
      if (denom == 0)
        throw std::runtime_error("split: incenter segment parallel to face " + face_name(mf.verts));
      const Rational t = dot(n, fv[0] - z1) / denom;
      if (sgn(t) <= 0 || sgn(1 - t) <= 0)
        throw std::runtime_error("split: incenter segment misses face " + face_name(mf.verts));
      m = z1 + t * (z2 - z1);
    } else {
      m = frac(1, 3) * (fv[0] + fv[1] + fv[2]);
    }
    auto lam = barycentric_tri(fv, m);
    for (const auto& l : lam)
      if (sgn(l) <= 0)
        throw std::runtime_error("split: face point not strictly interior to face " + face_name(mf.verts));
    mf.m_point = static_cast<long>(sc.points.size());
    sc.points.push_back(m);
  }

  // Frames: n outward from tet[0]; tangents = two face edges.
  for (auto& [key, mf] : fmap) {
    const Vec3 a = sc.points[mf.verts[0]], b = sc.points[mf.verts[1]], c = sc.points[mf.verts[2]];
    Vec3 n = cross(b - a, c - a);
    // Orient outward from tet[0]: opposite vertex on the negative side.
    const auto& T = mesh.tets[mf.tet[0]];
    Vec3 opp;
    for (int i : T) {
      if (i != mf.verts[0] && i != mf.verts[1] && i != mf.verts[2]) opp = sc.points[i];
    }
    if (sgn(dot(n, opp - a)) > 0) n = Rational(-1) * n;
    mf.frame.n = n;
    mf.frame.nn = dot(n, n);
    mf.frame.b1 = b - a;
    mf.frame.b2 = c - a;
    mf.frame.g11 = dot(mf.frame.b1, mf.frame.b1);
    mf.frame.g12 = dot(mf.frame.b1, mf.frame.b2);
    mf.frame.g22 = dot(mf.frame.b2, mf.frame.b2);
  }

  sc.faces.reserve(fmap.size());
  for (auto& [key, mf] : fmap) sc.faces.push_back(mf);

  // Macro edges.
  {
    std::set<std::array<int, 2>> es;
    for (const auto& T : mesh.tets)
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          es.insert({std::min(T[i], T[j]), std::max(T[i], T[j])});
    sc.macro_edges.assign(es.begin(), es.end());
  }

  // Cells: for tet t, face F of t, edge (a,b) of F: (a, b, m_F, z_T).
  for (int t = 0; t < ntet; ++t) {
    for (int fi = 0; fi < static_cast<int>(sc.faces.size()); ++fi) {
      const MacroFace& mf = sc.faces[fi];
      if (mf.tet[0] != t && mf.tet[1] != t) continue;
      for (int e = 0; e < 3; ++e) {
        long a = mf.verts[e], b = mf.verts[(e + 1) % 3];
        Cell cell;
        cell.pts = {std::min(a, b), std::max(a, b), mf.m_point, sc.z_point[t]};
        std::sort(cell.pts.begin(), cell.pts.end());
        cell.parent_tet = t;
        cell.parent_face = fi;
        const Vec3 p0 = sc.points[cell.pts[0]], p1 = sc.points[cell.pts[1]], p2 = sc.points[cell.pts[2]],
                   p3 = sc.points[cell.pts[3]];
        if (signed_volume6(p0, p1, p2, p3) == 0)
          throw std::runtime_error("split: degenerate sub-tet in tet " + std::to_string(t));
        sc.cells.push_back(cell);
      }
    }
  }
  std::sort(sc.cells.begin(), sc.cells.end(), [](const Cell& x, const Cell& y) {
    return std::tie(x.parent_tet, x.pts) < std::tie(y.parent_tet, y.pts);
  });

  auto find_cell = [&](int tet, std::array<long, 3> tri) -> int {
    std::sort(tri.begin(), tri.end());
    for (int c = 0; c < static_cast<int>(sc.cells.size()); ++c) {
      if (sc.cells[c].parent_tet != tet) continue;
      const auto& p = sc.cells[c].pts;
      int hit = 0;
      for (long q : tri) hit += std::binary_search(p.begin(), p.end(), q) ? 1 : 0;
      if (hit == 3) return c;
    }
    return -1;
  };

  // CT triangles, their adjacent cells, and interior CT edges.
  for (int fi = 0; fi < static_cast<int>(sc.faces.size()); ++fi) {
    MacroFace& mf = sc.faces[fi];
    for (int e = 0; e < 3; ++e) {
      long a = mf.verts[e], b = mf.verts[(e + 1) % 3];
      CtTri tri;
      tri.pts = {std::min(a, b), std::max(a, b), mf.m_point};
      std::sort(tri.pts.begin(), tri.pts.end());
      tri.cell[0] = find_cell(mf.tet[0], tri.pts);
      tri.cell[1] = mf.interior() ? find_cell(mf.tet[1], tri.pts) : -1;
      mf.tris[e] = tri;
    }
    // Interior CT edges: [m_F, v] for each face vertex v; adjacent triangles
    // are the two containing v.
    for (int k = 0; k < 3; ++k) {
      CtEdge ce;
      ce.face = fi;
      ce.p_m = mf.m_point;
      ce.p_v = mf.verts[k];
      ce.t_raw = sc.points[ce.p_v] - sc.points[ce.p_m];
      ce.s_raw = cross(mf.frame.n, ce.t_raw);
      int qs[2], nq = 0;
      for (int q = 0; q < 3; ++q) {
        long a = mf.verts[q], b = mf.verts[(q + 1) % 3];
        if (a == mf.verts[k] || b == mf.verts[k]) qs[nq++] = q;
      }
      ce.q1 = qs[0];
      ce.q2 = qs[1];
      mf.ct_edges[k] = static_cast<int>(sc.ct_edges.size());
      sc.ct_edges.push_back(ce);
    }
  }

  // Interior interfaces.
  auto push_iface = [&](int ca, int cb, std::array<long, 3> tri) {
    std::sort(tri.begin(), tri.end());
    Interface f;
    f.cellA = std::min(ca, cb);
    f.cellB = std::max(ca, cb);
    f.pts = tri;
    const Vec3 p0 = sc.points[tri[0]], p1 = sc.points[tri[1]], p2 = sc.points[tri[2]];
    Vec3 n = cross(p1 - p0, p2 - p0);
    // Outward from cellA.
    const auto& cp = sc.cells[f.cellA].pts;
    Vec3 opp;
    for (long q : cp) {
      if (q != tri[0] && q != tri[1] && q != tri[2]) opp = sc.points[q];
    }
    if (sgn(dot(n, opp - p0)) > 0) n = Rational(-1) * n;
    f.n_raw = n;
    sc.interfaces.push_back(f);
  };

  for (int fi = 0; fi < static_cast<int>(sc.faces.size()); ++fi) {
    const MacroFace& mf = sc.faces[fi];
    // Fan faces within each adjacent tet: (v, m_F, z_T).
    for (int s = 0; s < 2; ++s) {
      if (mf.tet[s] < 0) continue;
      const long z = sc.z_point[mf.tet[s]];
      for (int k = 0; k < 3; ++k) {
        std::array<long, 3> tri{static_cast<long>(mf.verts[k]), mf.m_point, z};
        const CtEdge& ce = sc.ct_edges[mf.ct_edges[k]];
        int ca = find_cell(mf.tet[s], {tri[0], tri[1], z});
        (void)ce;
        // The two cells of this tet containing edge [v, m_F]:
        int cells2[2], nc = 0;
        for (int c = 0; c < static_cast<int>(sc.cells.size()); ++c) {
          if (sc.cells[c].parent_tet != mf.tet[s]) continue;
          const auto& p = sc.cells[c].pts;
          if (std::binary_search(p.begin(), p.end(), static_cast<long>(mf.verts[k])) &&
              std::binary_search(p.begin(), p.end(), mf.m_point))
            cells2[nc++] = c;
        }
        (void)ca;
        if (nc == 2) push_iface(cells2[0], cells2[1], tri);
      }
    }
    // Cross-tet interfaces: the CT triangles of interior faces.
    if (mf.interior()) {
      for (int e = 0; e < 3; ++e) push_iface(mf.tris[e].cell[0], mf.tris[e].cell[1], mf.tris[e].pts);
    }
  }
  // Alfeld faces: for each tet, each macro edge (a,b): (a, b, z_T) between the
  // two cells from the two faces containing the edge.
  for (int t = 0; t < ntet; ++t) {
    const auto& T = mesh.tets[t];
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        long a = std::min(T[i], T[j]), b = std::max(T[i], T[j]);
        int cells2[4], nc = 0;
        for (int c = 0; c < static_cast<int>(sc.cells.size()); ++c) {
          if (sc.cells[c].parent_tet != t) continue;
          const auto& p = sc.cells[c].pts;
          if (std::binary_search(p.begin(), p.end(), a) && std::binary_search(p.begin(), p.end(), b))
            cells2[nc++] = c;
        }
        if (nc == 2) push_iface(cells2[0], cells2[1], {a, b, sc.z_point[t]});
      }
    }
  }
  std::sort(sc.interfaces.begin(), sc.interfaces.end(), [](const Interface& x, const Interface& y) {
    return std::tie(x.cellA, x.cellB, x.pts) < std::tie(y.cellA, y.cellB, y.pts);
  });

  return sc;
}

SplitComplex wf_split_local(const std::array<Vec3, 4>& tet, const std::optional<Vec3>& z,
                            const std::optional<std::array<Vec3, 4>>& m) {
  MacroMesh mesh;
  mesh.vertices.assign(tet.begin(), tet.end());
  mesh.tets.push_back({0, 1, 2, 3});
  mesh.interior_points.resize(1);
  if (z) mesh.interior_points[0] = *z;
  SplitOptions opt;
  if (m) {
    // m[k] belongs to the face opposite vertex k.
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> f;
      int idx = 0;
      for (int i = 0; i < 4; ++i)
        if (i != k) f[idx++] = i;
      std::sort(f.begin(), f.end());
      opt.face_points[f] = (*m)[k];
    }
  }
  return wf_split_global(mesh, opt);
}

std::vector<std::vector<long>> SplitComplex::skeleton(int s, Level level, bool interior_only) const {
  std::set<std::vector<long>> out;
  const long nv = static_cast<long>(macro.vertices.size());

  // A macro vertex is on the domain boundary iff it lies on a boundary face.
  std::vector<char> vert_bdry(nv, 0);
  for (const auto& f : faces)
    if (!f.interior())
      for (int v : f.verts) vert_bdry[v] = 1;

  if (level == Level::Macro) {
    switch (s) {
      case 0:
        for (long v = 0; v < nv; ++v)
          if (!interior_only || !vert_bdry[v]) out.insert({v});
        break;
      case 1:
        for (const auto& e : macro_edges) {
          if (interior_only) {
            bool bdry = false;
            for (const auto& f : faces) {
              if (f.interior()) continue;
              bool ha = std::find(f.verts.begin(), f.verts.end(), e[0]) != f.verts.end();
              bool hb = std::find(f.verts.begin(), f.verts.end(), e[1]) != f.verts.end();
              if (ha && hb) bdry = true;
            }
            if (bdry) continue;
          }
          out.insert({e[0], e[1]});
        }
        break;
      case 2:
        for (const auto& f : faces)
          if (!interior_only || f.interior()) out.insert({f.verts[0], f.verts[1], f.verts[2]});
        break;
      case 3:
        for (size_t t = 0; t < macro.tets.size(); ++t) {
          std::vector<long> v(macro.tets[t].begin(), macro.tets[t].end());
          std::sort(v.begin(), v.end());
          out.insert(v);
        }
        break;
      default:
        throw std::invalid_argument("skeleton: s out of range");
    }
    return {out.begin(), out.end()};
  }

  // Split level: collect from cells.
  std::set<std::vector<long>> all;
  for (const auto& c : cells) {
    const auto& p = c.pts;
    if (s == 0) {
      for (long q : p) all.insert({q});
    } else if (s == 1) {
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) all.insert({p[i], p[j]});
    } else if (s == 2) {
      for (int k = 0; k < 4; ++k) {
        std::vector<long> f;
        for (int i = 0; i < 4; ++i)
          if (i != k) f.push_back(p[i]);
        all.insert(f);
      }
    } else if (s == 3) {
      all.insert({p[0], p[1], p[2], p[3]});
    } else {
      throw std::invalid_argument("skeleton: s out of range");
    }
  }
  if (!interior_only) return {all.begin(), all.end()};

  // Interior filter: a split simplex is interior iff it is not contained in a
  // boundary CT triangle (for s<=2); cells are always interior.
  std::set<std::vector<long>> bdry_pts;
  for (const auto& f : faces) {
    if (f.interior()) continue;
    for (const auto& tri : f.tris) {
      for (long q : tri.pts) bdry_pts.insert({q});
    }
  }
  auto on_boundary = [&](const std::vector<long>& simplex) {
    for (const auto& f : faces) {
      if (f.interior()) continue;
      for (const auto& tri : f.tris) {
        int hit = 0;
        for (long q : simplex)
          if (q == tri.pts[0] || q == tri.pts[1] || q == tri.pts[2]) ++hit;
        if (hit == static_cast<int>(simplex.size())) return true;
      }
    }
    return false;
  };
  for (const auto& sx : all) {
    if (s == 3 || !on_boundary(sx)) out.insert(sx);
  }
  return {out.begin(), out.end()};
}

std::vector<int> SplitComplex::global_ct_edge_set() const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(ct_edges.size()); ++e)
    if (faces[ct_edges[e].face].interior()) out.push_back(e);
  return out;
}

JumpPairing SplitComplex::theta_slots(int ct_edge) const {
  if (ct_edge < 0 || ct_edge >= static_cast<int>(ct_edges.size()))
    throw std::invalid_argument("theta_slots: no such CT edge");
  const CtEdge& ce = ct_edges[ct_edge];
  const MacroFace& mf = faces[ce.face];
  JumpPairing jp;
  jp.ct_edge = ct_edge;
  for (int s = 0; s < 2; ++s) {
    jp.cell_of[s][0] = mf.tris[ce.q1].cell[s];
    jp.cell_of[s][1] = mf.tris[ce.q2].cell[s];
  }
  return jp;
}

std::array<int, 3> SplitComplex::face_cells(int face, int side) const {
  const MacroFace& mf = faces[face];
  return {mf.tris[0].cell[side], mf.tris[1].cell[side], mf.tris[2].cell[side]};
}

// ---------------------------------------------------------------------------
// Builtins

std::array<Vec3, 4> disphenoid_vertices() {
  return {Vec3(Rational(2), Rational(1), Rational(1)), Vec3(Rational(2), Rational(-1), Rational(-1)),
          Vec3(Rational(-2), Rational(1), Rational(-1)), Vec3(Rational(-2), Rational(-1), Rational(1))};
}

std::array<Vec3, 4> reference_tet_vertices() {
  return {Vec3(Rational(0), Rational(0), Rational(0)), Vec3(Rational(1), Rational(0), Rational(0)),
          Vec3(Rational(0), Rational(1), Rational(0)), Vec3(Rational(0), Rational(0), Rational(1))};
}

MacroMesh builtin_mesh(const std::string& name) {
  MacroMesh m;
  if (name == "disphenoid") {
    auto v = disphenoid_vertices();
    m.vertices.assign(v.begin(), v.end());
    m.tets.push_back({0, 1, 2, 3});
    m.interior_points.resize(1);
  } else if (name == "reftet") {
    auto v = reference_tet_vertices();
    m.vertices.assign(v.begin(), v.end());
    m.tets.push_back({0, 1, 2, 3});
    m.interior_points.resize(1);
  } else if (name == "twotet") {
    m.vertices = {Vec3(Rational(0), Rational(0), Rational(0)), Vec3(Rational(1), Rational(0), Rational(0)),
                  Vec3(Rational(0), Rational(1), Rational(0)), Vec3(Rational(0), Rational(0), Rational(1)),
                  Vec3(Rational(1), Rational(1), Rational(1))};
    m.tets.push_back({0, 1, 2, 3});
    m.tets.push_back({1, 2, 3, 4});
    m.interior_points.resize(2);
    m.interior_points[0] = Vec3(frac(1, 4), frac(1, 4), frac(1, 4));
    m.interior_points[1] = Vec3(frac(1, 2), frac(1, 2), frac(1, 2));
  } else if (name == "cube6") {
    // Kuhn triangulation of the unit cube: six tets around the main diagonal.
    auto id = [&](int x, int y, int z) { return x + 2 * y + 4 * z; };
    m.vertices.resize(8);
    for (int z = 0; z < 2; ++z)
      for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x)
          m.vertices[id(x, y, z)] = Vec3(Rational(x), Rational(y), Rational(z));
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
      int coord[3] = {0, 0, 0};
      std::array<int, 4> tet;
      tet[0] = id(0, 0, 0);
      for (int k = 0; k < 3; ++k) {
        coord[p[k]] = 1;
        tet[k + 1] = id(coord[0], coord[1], coord[2]);
      }
      m.tets.push_back(tet);
    }
    m.interior_points.resize(6);
    for (size_t t = 0; t < m.tets.size(); ++t) {
      Vec3 c;
      for (int i : m.tets[t]) c = c + m.vertices[i];
      m.interior_points[t] = frac(1, 4) * c;
    }
  } else {
    throw std::invalid_argument("unknown builtin geometry '" + name + "'");
  }
  return m;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Rational json_rat(const nlohmann::json& j) {
  if (j.is_string()) return rat_parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_number_float()) return Rational(j.get<double>());  // exact binary expansion
  throw std::runtime_error("mesh json: expected number or \"p/q\" string");
}

Vec3 json_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("mesh json: point must have 3 coordinates");
  return Vec3(json_rat(j[0]), json_rat(j[1]), json_rat(j[2]));
}

}  // namespace

MacroMesh mesh_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MacroMesh m;
  for (const auto& v : j.at("vertices")) m.vertices.push_back(json_vec(v));
  for (const auto& t : j.at("tets")) {
    if (!t.is_array() || t.size() != 4) throw std::runtime_error("mesh json: tet must have 4 vertices");
    m.tets.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()});
  }
  m.interior_points.resize(m.tets.size());
  if (j.contains("interior_points")) {
    const auto& ip = j["interior_points"];
    for (size_t t = 0; t < std::min(ip.size(), m.tets.size()); ++t)
      if (!ip[t].is_null()) m.interior_points[t] = json_vec(ip[t]);
  }
  return m;
}

std::string split_to_json(const SplitComplex& sc) {
  nlohmann::ordered_json j;
  auto vec_json = [](const Vec3& v) {
    return nlohmann::ordered_json::array({rat_str(v[0]), rat_str(v[1]), rat_str(v[2])});
  };
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : sc.points) j["points"].push_back(vec_json(p));
  j["sub_tets"] = nlohmann::ordered_json::array();
  for (const auto& c : sc.cells)
    j["sub_tets"].push_back({{"points", c.pts}, {"parent_tet", c.parent_tet}, {"parent_face", c.parent_face}});
  j["face_points"] = nlohmann::ordered_json::array();
  for (const auto& f : sc.faces)
    j["face_points"].push_back({{"face", f.verts}, {"m", vec_json(sc.points[f.m_point])},
                                {"interior", f.interior()}});
  j["interior_points"] = nlohmann::ordered_json::array();
  for (size_t t = 0; t < sc.z_point.size(); ++t)
    j["interior_points"].push_back(
        {{"tet", t}, {"z", vec_json(sc.points[sc.z_point[t]])}, {"exact_incenter", (bool)sc.z_exact_incenter[t]}});
  nlohmann::ordered_json skel;
  for (int s = 0; s <= 3; ++s) {
    skel["split_" + std::to_string(s)] = sc.skeleton(s, Level::Split, false).size();
    skel["split_interior_" + std::to_string(s)] = sc.skeleton(s, Level::Split, true).size();
  }
  skel["global_ct_edges"] = sc.global_ct_edge_set().size();
  j["skeleton"] = skel;
  return j.dump(2);
}

}  // namespace wfela
