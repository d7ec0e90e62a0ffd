#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "wfela/bernstein.hpp"
#include "wfela/wfmesh.hpp"

using namespace wfela;

TEST_CASE("incenter of the disphenoid is exact (0,0,0)") {
  auto D = disphenoid_vertices();
  // All four raw face normals have squared norm 144 (areas 6).
  for (int i = 0; i < 4; ++i) {
    std::array<Vec3, 3> f;
    int m = 0;
    for (int j = 0; j < 4; ++j)
      if (j != i) f[m++] = D[j];
    Vec3 cr = cross(f[1] - f[0], f[2] - f[0]);
    CHECK(dot(cr, cr) == Rational(144));
  }
  IncenterResult ic = incenter(D);
  CHECK(ic.exact);
  CHECK(ic.point == Vec3(Rational(0), Rational(0), Rational(0)));
}

TEST_CASE("incenter of the reference tet is flagged inexact, surrogate centroid") {
  auto T = reference_tet_vertices();
  IncenterResult ic = incenter(T);
  CHECK(!ic.exact);
  CHECK(ic.point == Vec3(frac(1, 4), frac(1, 4), frac(1, 4)));
}

TEST_CASE("degenerate tet is an error") {
  std::array<Vec3, 4> Z{Vec3(), Vec3(), Vec3(), Vec3()};
  CHECK_THROWS_AS(incenter(Z), std::invalid_argument);
}

TEST_CASE("local split of the reference tet") {
  SplitComplex sc = wf_split_local(reference_tet_vertices());
  CHECK(sc.cells.size() == 12);
  Rational vol = 0;
  FieldLayout l = volume_layout(sc, 0, 1);
  for (const auto& c : l.cells) vol += c.measure;
  CHECK(vol == frac(1, 6));
  // Each macro face has exactly 3 CT triangles and 3 interior CT edges.
  REQUIRE(sc.faces.size() == 4);
  for (const auto& f : sc.faces) {
    CHECK(f.tris.size() == 3);
    CHECK(f.ct_edges.size() == 3);
  }
  CHECK(sc.ct_edges.size() == 12);
  CHECK(sc.interfaces.size() == 18);
}

TEST_CASE("split point on a face is an error") {
  auto T = reference_tet_vertices();
  CHECK_THROWS_WITH_AS(wf_split_local(T, Vec3(frac(1, 3), frac(1, 3), Rational(0))),
                       doctest::Contains("interior"), std::runtime_error);
}

TEST_CASE("two-tet global split: segment intersection and E(T_h^wf)") {
  SplitComplex sc = wf_split_global(builtin_mesh("twotet"));
  // Shared face x+y+z=1 gets m_F = (1/3,1/3,1/3).
  bool found = false;
  for (const auto& f : sc.faces) {
    if (f.interior()) {
      found = true;
      CHECK(sc.points[f.m_point] == Vec3(frac(1, 3), frac(1, 3), frac(1, 3)));
    }
  }
  CHECK(found);
  CHECK(sc.global_ct_edge_set().size() == 3);
  CHECK(sc.cells.size() == 24);
}

TEST_CASE("single-tet global equals local with barycenter face points") {
  MacroMesh m = builtin_mesh("disphenoid");
  SplitComplex g = wf_split_global(m);
  SplitComplex l = wf_split_local(disphenoid_vertices());
  REQUIRE(g.cells.size() == l.cells.size());
  for (size_t i = 0; i < g.points.size(); ++i) CHECK(g.points[i] == l.points[i]);
}

TEST_CASE("skeleton counts") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  CHECK(sc.skeleton(0, Level::Macro, false).size() == 4);
  CHECK(sc.skeleton(0, Level::Split, false).size() == 9);
  CHECK(sc.skeleton(3, Level::Split, false).size() == 12);
  CHECK(sc.skeleton(1, Level::Split, false).size() == 26);
  CHECK(sc.skeleton(2, Level::Split, false).size() == 30);
  // Interior skeleton: for a single tet only z is an interior point.
  CHECK(sc.skeleton(0, Level::Split, true).size() == 1);
}

TEST_CASE("frame algebra is exact") {
  SplitComplex sc = wf_split_global(builtin_mesh("twotet"));
  for (const auto& f : sc.faces) {
    const Frame& fr = f.frame;
    // Q n = 0, Q^2 = Q, QP = 0 on a spanning set.
    CHECK(fr.Q(fr.n) == Vec3());
    for (const Vec3& v : {fr.b1, fr.b2, fr.n}) {
      CHECK(fr.Q(fr.Q(v)) == fr.Q(v));
      CHECK(fr.Q(fr.P(v)) == Vec3());
      CHECK(fr.Q(v) + fr.P(v) == v);
    }
    // s_e . t_e = 0 and s_e tangent to F.
    for (int e : f.ct_edges) {
      const CtEdge& ce = sc.ct_edges[e];
      CHECK(dot(ce.s_raw, ce.t_raw) == 0);
      CHECK(dot(ce.s_raw, fr.n) == 0);
    }
  }
}

TEST_CASE("Q from n=(0,0,2) is diag(1,1,0)") {
  Frame fr;
  fr.n = Vec3(Rational(0), Rational(0), Rational(2));
  fr.nn = 4;
  CHECK(fr.Q(Vec3(Rational(1), Rational(0), Rational(0))) == Vec3(Rational(1), Rational(0), Rational(0)));
  CHECK(fr.Q(Vec3(Rational(0), Rational(1), Rational(0))) == Vec3(Rational(0), Rational(1), Rational(0)));
  CHECK(fr.Q(Vec3(Rational(0), Rational(0), Rational(1))) == Vec3());
}

TEST_CASE("theta vanishes for continuous fields and for matched jumps") {
  SplitComplex sc = wf_split_global(builtin_mesh("twotet"));
  FieldLayout l = volume_layout(sc, 2, 1);

  // Globally continuous: a polynomial.
  PiecewiseField p = field_from_polys(l, {Poly::var(0) * Poly::var(1) + Poly::constant(Rational(3))});
  for (int e : sc.global_ct_edge_set())
    for (const auto& v : theta_eval(p, e)) CHECK(v == 0);

  // Distinct constants per sub-tet with equal jumps from both sides.
  for (int e : sc.global_ct_edge_set()) {
    JumpPairing jp = sc.theta_slots(e);
    PiecewiseField q(volume_layout(sc, 1, 1));
    auto set_cell = [&](int cell, const Rational& val) {
      for (long k = 0; k < q.layout.nbern(); ++k) q.coef[q.layout.index(cell, k, 0)] = val;
    };
    set_cell(jp.cell_of[0][0], Rational(5));
    set_cell(jp.cell_of[0][1], Rational(2));  // jump 3 on side 0
    set_cell(jp.cell_of[1][0], Rational(9));
    set_cell(jp.cell_of[1][1], Rational(6));  // jump 3 on side 1
    for (const auto& v : theta_eval(q, e)) CHECK(v == 0);
    // Unequal jumps do not vanish.
    set_cell(jp.cell_of[1][1], Rational(7));
    bool nonzero = false;
    for (const auto& v : theta_eval(q, e)) nonzero = nonzero || (v != 0);
    CHECK(nonzero);
  }
}

TEST_CASE("mesh json round trip") {
  MacroMesh m = mesh_from_json(R"({
    "vertices": [[0,0,0],["1",0,0],[0,"1/1",0],[0,0,1]],
    "tets": [[0,1,2,3]],
    "interior_points": [["1/4","1/4","1/4"]]
  })");
  SplitComplex sc = wf_split_global(m);
  CHECK(sc.cells.size() == 12);
  std::string j = split_to_json(sc);
  CHECK(j.find("sub_tets") != std::string::npos);
}

TEST_CASE("volume conservation on every split") {
  for (const char* name : {"disphenoid", "reftet", "twotet", "cube6"}) {
    MacroMesh m = builtin_mesh(name);
    SplitComplex sc = wf_split_global(m);
    Rational total = 0;
    FieldLayout l = volume_layout(sc, 0, 1);
    for (const auto& c : l.cells) total += c.measure;
    Rational expected = 0;
    for (const auto& T : m.tets) {
      Rational v = signed_volume6(m.vertices[T[0]], m.vertices[T[1]], m.vertices[T[2]], m.vertices[T[3]]) / 6;
      expected += sgn(v) < 0 ? Rational(-v) : v;
    }
    CHECK(total == expected);
  }
}

TEST_CASE("parent maps: split edges lie in their parent closure") {
  SplitComplex sc = wf_split_global(builtin_mesh("twotet"));
  for (const auto& cell : sc.cells) {
    const auto& T = sc.macro.tets[cell.parent_tet];
    std::array<Vec3, 4> tv{sc.points[T[0]], sc.points[T[1]], sc.points[T[2]], sc.points[T[3]]};
    for (long p : cell.pts) {
      auto lam = barycentric_tet(tv, sc.points[p]);
      for (const auto& l : lam) CHECK(sgn(l) >= 0);
    }
  }
}
