#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "wfela/bernstein.hpp"
#include "wfela/rng.hpp"
#include "wfela/wfmesh.hpp"

using namespace wfela;

namespace {

PiecewiseField random_field(Rng& rng, const FieldLayout& l) {
  PiecewiseField f(l);
  for (auto& c : f.coef) c = rng.small_int(-3, 3);
  return f;
}

}  // namespace

TEST_CASE("d/dx of x on the unit edge is 1") {
  SplitComplex sc = wf_split_local(reference_tet_vertices());
  FieldLayout l = edge_layout(sc, 0, 1, 1, 1);  // edge (0,0,0)-(1,0,0)
  PiecewiseField x = field_from_polys(l, {Poly::var(0)});
  SparseMatrix D = deriv_matrix(l, Vec3(Rational(1), Rational(0), Rational(0)));
  auto dx = mul(D, x.coef);
  REQUIRE(dx.size() == 1);
  CHECK(dx[0] == 1);
  // integral of x over the unit edge is 1/2
  CHECK(integrate(x) == frac(1, 2));
}

TEST_CASE("gradient of barycentric coordinates is constant") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  FieldLayout l = volume_layout(sc, 1, 1);
  Vec3 dir(Rational(1), Rational(2), Rational(-1));
  for (int i = 0; i < 4; ++i) {
    Poly lam = macro_barycentric(sc, 0, i);
    PiecewiseField f = field_from_polys(l, {lam});
    SparseMatrix D = deriv_matrix(l, dir);
    auto df = mul(D, f.coef);
    // Expected: grad(lambda_i) . dir, one constant per cell.
    Poly expect = dir[0] * lam.deriv(0) + dir[1] * lam.deriv(1) + dir[2] * lam.deriv(2);
    REQUIRE(expect.degree() == 0);
    Rational e = expect.eval(Vec3());
    for (const auto& v : df) CHECK(v == e);
  }
}

TEST_CASE("mixed second derivatives commute on random degree-4 fields") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  FieldLayout l4 = volume_layout(sc, 4, 1);
  FieldLayout l3 = volume_layout(sc, 3, 1);
  Rng rng(99);
  Vec3 ex(Rational(1), Rational(0), Rational(0)), ey(Rational(0), Rational(1), Rational(0));
  SparseMatrix Dx4 = deriv_matrix(l4, ex), Dy4 = deriv_matrix(l4, ey);
  SparseMatrix Dx3 = deriv_matrix(l3, ex), Dy3 = deriv_matrix(l3, ey);
  SparseMatrix A = Dy3 * Dx4, B = Dx3 * Dy4;
  for (int t = 0; t < 3; ++t) {
    PiecewiseField f = random_field(rng, l4);
    CHECK(mul(A, f.coef) == mul(B, f.coef));
  }
}

TEST_CASE("traces") {
  SplitComplex sc = wf_split_local(reference_tet_vertices());
  FieldLayout l = volume_layout(sc, 3, 1);

  // Constant field traces to the same constant.
  PiecewiseField c = field_from_polys(l, {Poly::constant(frac(7, 3))});
  const auto& cell = l.cells[0];
  auto pairs = trace_pairs(3, cell.pts, {cell.pts[0], cell.pts[2]});
  for (const auto& [sub, src] : pairs) CHECK(c.coef[l.index(0, src, 0)] == frac(7, 3));

  // trace of lambda_i on the opposite face is 0.
  Poly lam0 = macro_barycentric(sc, 0, 0);
  PiecewiseField f = field_from_polys(l, {lam0});
  // Face opposite macro vertex 0: find it.
  for (const auto& mf : sc.faces) {
    if (mf.verts[0] == 0) continue;  // faces containing vertex 0 are skipped
    for (int k = 0; k < 3; ++k) {
      int cellid = mf.tris[k].cell[0];
      std::vector<long> sub(mf.tris[k].pts.begin(), mf.tris[k].pts.end());
      for (const auto& [s, src] : trace_pairs(3, l.cells[cellid].pts, sub))
        CHECK(f.coef[l.index(cellid, src, 0)] == 0);
    }
  }
}

TEST_CASE("trace commutes with tangential differentiation") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  Rng rng(17);
  const int face = 1;
  const MacroFace& mf = sc.faces[face];
  const Vec3 t = mf.frame.b1;  // tangent direction
  FieldLayout lv4 = volume_layout(sc, 4, 1), lv3 = volume_layout(sc, 3, 1);
  FieldLayout lf4 = face_layout(sc, face, 4, 1), lf3 = face_layout(sc, face, 3, 1);
  SparseMatrix Dv = deriv_matrix(lv4, t), Df = deriv_matrix(lf4, t);

  auto trace_to_face = [&](const PiecewiseField& f, const FieldLayout& lf) {
    PiecewiseField g(lf);
    for (int k = 0; k < 3; ++k) {
      int cellid = mf.tris[k].cell[0];
      std::vector<long> sub(mf.tris[k].pts.begin(), mf.tris[k].pts.end());
      for (const auto& [s, src] : trace_pairs(f.layout.degree, f.layout.cells[cellid].pts, sub))
        g.coef[lf.index(k, s, 0)] = f.coef[f.layout.index(cellid, src, 0)];
    }
    return g;
  };

  for (int trial = 0; trial < 3; ++trial) {
    PiecewiseField f = random_field(rng, lv4);
    PiecewiseField df(lv3);
    df.coef = mul(Dv, f.coef);
    PiecewiseField a = trace_to_face(df, lf3);
    PiecewiseField tr = trace_to_face(f, lf4);
    auto b = mul(Df, tr.coef);
    CHECK(a.coef == b);
  }
}

TEST_CASE("integrals") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  FieldLayout l = volume_layout(sc, 0, 1);
  PiecewiseField one = field_from_polys(l, {Poly::constant(Rational(1))});
  CHECK(integrate(one) == frac(16, 3));  // |disphenoid| = 16/3
}

TEST_CASE("partition of unity at random rational points") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  FieldLayout l = volume_layout(sc, 3, 1);
  PiecewiseField ones(l);
  for (auto& c : ones.coef) c = 1;  // sum of all basis functions
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    std::vector<Rational> lam(4);
    Rational s = 0;
    for (int i = 0; i < 3; ++i) {
      lam[i] = frac(1 + static_cast<long>(rng.below(5)), 12);
      s += lam[i];
    }
    lam[3] = 1 - s;
    auto v = eval_at(ones, static_cast<int>(rng.below(12)), lam);
    CHECK(v[0] == 1);
  }
}

TEST_CASE("product rule and integral symmetry") {
  SplitComplex sc = wf_split_local(reference_tet_vertices());
  FieldLayout l2 = volume_layout(sc, 2, 1);
  Rng rng(55);
  Vec3 dir(Rational(2), Rational(-1), Rational(3));
  for (int t = 0; t < 3; ++t) {
    PiecewiseField f = random_field(rng, l2), g = random_field(rng, l2);
    PiecewiseField fg = product(f, g);
    // d(fg)
    auto dfg = mul(deriv_matrix(fg.layout, dir), fg.coef);
    // f dg + g df
    PiecewiseField df(volume_layout(sc, 1, 1)), dg(volume_layout(sc, 1, 1));
    df.coef = mul(deriv_matrix(l2, dir), f.coef);
    dg.coef = mul(deriv_matrix(l2, dir), g.coef);
    PiecewiseField sum1 = product(f, dg), sum2 = product(g, df);
    REQUIRE(sum1.layout.degree == 3);
    // compare at degree 3: elevate d(fg) coefficient vector? d(fg) already degree 3.
    std::vector<Rational> rhs(sum1.coef.size());
    for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = sum1.coef[i] + sum2.coef[i];
    CHECK(dfg == rhs);
    CHECK(integrate_product(f, g) == integrate_product(g, f));
  }
}

TEST_CASE("mass matrix of degree-2 basis on a CT face is SPD") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  FieldLayout lf = face_layout(sc, 0, 2, 1);
  SparseMatrix M = mass_matrix(lf);
  CHECK(spd_check(M.dense()));
}

TEST_CASE("degree elevation preserves values") {
  SplitComplex sc = wf_split_local(reference_tet_vertices());
  FieldLayout l2 = volume_layout(sc, 2, 1);
  PiecewiseField f = field_from_polys(l2, {Poly::var(0) * Poly::var(1) + Poly::constant(frac(1, 2))});
  SparseMatrix E = elevation_matrix(l2);
  auto up = mul(E, f.coef);
  FieldLayout l3 = volume_layout(sc, 3, 1);
  PiecewiseField g = field_from_polys(l3, {Poly::var(0) * Poly::var(1) + Poly::constant(frac(1, 2))});
  CHECK(up == g.coef);
}
