#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "wfela/eladofs.hpp"
#include "wfela/rng.hpp"

using namespace wfela;

namespace {

struct Fx {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache{sc};
};

long family_total(const UnisolvenceReport& rep, const std::string& tag) {
  for (const auto& [t, c] : rep.family_counts)
    if (t == tag) return c;
  return -1;
}

}  // namespace

TEST_CASE("U0 family counts and unisolvence at r = 3") {
  Fx fx;
  UnisolvenceReport rep = unisolvence(fx.cache, "U0", 3);
  CHECK(rep.dim == 210);
  CHECK(rep.dof_count == 210);
  CHECK(family_total(rep, "U0:dofa") == 12);
  CHECK(family_total(rep, "U0:dofb") == 36);
  CHECK(family_total(rep, "U0:dofc") == 18);
  CHECK(family_total(rep, "U0:dofd") == 72);
  CHECK(family_total(rep, "U0:dofe") == 24);
  CHECK(family_total(rep, "U0:doff") == 12);
  CHECK(family_total(rep, "U0:dofg") == 12);
  CHECK(family_total(rep, "U0:dofh") == 24);
  CHECK(family_total(rep, "U0:dofi") == 0);
  CHECK(rep.pass());
}

TEST_CASE("U1 family counts and unisolvence at r = 3") {
  Fx fx;
  UnisolvenceReport rep = unisolvence(fx.cache, "U1", 3);
  CHECK(rep.dim == 294);
  CHECK(rep.dof_count == 294);
  const long expect[12] = {24, 72, 54, 12, 24, 36, 24, 24, 12, 12, 0, 0};
  const char* tags[12] = {"U1:dofa", "U1:dofb", "U1:dofc", "U1:dofd", "U1:dofe", "U1:doff",
                          "U1:dofg", "U1:dofh", "U1:dofi", "U1:dofj", "U1:dofk", "U1:dofl"};
  for (int k = 0; k < 12; ++k) {
    INFO(tags[k]);
    CHECK(family_total(rep, tags[k]) == expect[k]);
  }
  CHECK(rep.pass());
}

TEST_CASE("U2 family counts, unisolvence, and the structural audit at r = 3") {
  Fx fx;
  UnisolvenceReport rep = unisolvence(fx.cache, "U2", 3);
  CHECK(rep.dim == 126);
  CHECK(rep.dof_count == 126);
  CHECK(family_total(rep, "U2:dofa") == 12);
  CHECK(family_total(rep, "U2:dofb") == 36);
  CHECK(family_total(rep, "U2:dofc") == 48);
  CHECK(family_total(rep, "U2:dofd") == 30);
  CHECK(family_total(rep, "U2:dofe") == 0);
  // No vertex or edge degrees of freedom on the stress space.
  CHECK(rep.vertex_dofs == 0);
  CHECK(rep.edge_dofs == 0);
  CHECK(rep.pass());
}

TEST_CASE("U3 counts and unisolvence at r = 3") {
  Fx fx;
  UnisolvenceReport rep = unisolvence(fx.cache, "U3", 3);
  CHECK(rep.dim == 36);
  CHECK(family_total(rep, "U3:dofa") == 6);
  CHECK(family_total(rep, "U3:dofb") == 30);
  CHECK(rep.pass());
}

TEST_CASE("projection reproduces space elements and constants") {
  Fx fx;
  Projection p0(fx.cache, dofs_u0(fx.cache, 3));
  const FESpace& u0 = fx.cache.tet_space("U0", 4);

  // Constant input: projected exactly, with eps(P u) = 0.
  FieldLayout l4 = volume_layout(fx.sc, 4, 3);
  PiecewiseField cst = field_from_polys(
      l4, {Poly::constant(frac(2, 3)), Poly::constant(Rational(-1)), Poly::constant(frac(1, 7))});
  PiecewiseField pc = p0.apply(cst);
  CHECK(pc.coef == cst.coef);
  LinearMap eps = op_eps(l4);
  for (const auto& v : mul(eps.m, pc.coef)) CHECK(v == 0);

  // Idempotence on 20 random space elements.
  Rng rng(404);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rational> c(u0.dim);
    for (auto& x : c) x = rng.small_int(-4, 4);
    PiecewiseField el(u0.layout);
    el.coef = mul(from_dense(u0.basis), c);
    PiecewiseField pe = p0.apply(el);
    CHECK(pe.coef == el.coef);
  }
}

TEST_CASE("projection matches all DOFs of a smooth input") {
  Fx fx;
  DofSet ds = dofs_u0(fx.cache, 3);
  Projection p0(fx.cache, dofs_u0(fx.cache, 3));
  Rng rng(7);
  FieldLayout l5 = volume_layout(fx.sc, 5, 3);
  std::vector<Poly> comps(3);
  for (auto& p : comps) {
    p = Poly::constant(Rational(0));
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; i + j <= 2; ++j)
        for (int k = 0; i + j + k <= 2; ++k) {
          Poly m = Poly::constant(rng.small_int(-2, 2));
          for (int a = 0; a < i; ++a) m = m * Poly::var(0);
          for (int a = 0; a < j; ++a) m = m * Poly::var(1);
          for (int a = 0; a < k; ++a) m = m * Poly::var(2);
          p = p + m;
        }
  }
  PiecewiseField input = field_from_polys(l5, comps);
  PiecewiseField proj = p0.apply(input);
  SparseMatrix Rin = ds.rows_for(l5);
  SparseMatrix Rout = ds.rows_for(proj.layout);
  CHECK(mul(Rin, input.coef) == mul(Rout, proj.coef));
}

TEST_CASE("family recombination leaves the projection unchanged") {
  Fx fx;
  DofSet a = dofs_u0(fx.cache, 3);
  DofSet b = dofs_u0(fx.cache, 3);
  // Recombine the U0:dofc family of the first edge by an invertible matrix.
  for (auto& fam : b.families) {
    if (fam.tag != "U0:dofc") continue;
    auto old = fam.rows;
    long n = fam.count;
    Rng rng(99);
    DenseMatrix T(n, n);
    do {
      for (auto& x : T.a) x = rng.small_int(-3, 3);
    } while (rank_of(from_dense(T), RankMode::Exact).rank < n);
    fam.rows = [old, T](const FieldLayout& l) { return from_dense(T) * old(l); };
    break;
  }
  Projection pa(fx.cache, std::move(a)), pb(fx.cache, std::move(b));
  FieldLayout l5 = volume_layout(fx.sc, 5, 3);
  PiecewiseField input = field_from_polys(
      l5, {Poly::var(0) * Poly::var(1), Poly::var(2) * Poly::var(2), Poly::var(0) + Poly::var(2)});
  CHECK(pa.apply(input).coef == pb.apply(input).coef);
}

TEST_CASE("commuting identities of Theorem 6.1, five seeded trials at r = 3") {
  Fx fx;
  CommutingReport rep = commuting_suite(fx.cache, 3, 5, 7);
  INFO("failures ", rep.failures);
  CHECK(rep.trials == 5);
  CHECK(rep.failures == 0);
  CHECK(rep.checks.size() == 15);
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
}

TEST_CASE("inc of an eps-image projects to zero (com:inc sanity)") {
  Fx fx;
  // v = eps of a random cubic vector field has inc v = 0; both sides of
  // com:inc vanish.
  Projection p1(fx.cache, dofs_u1(fx.cache, 3));
  Projection p2(fx.cache, dofs_u2(fx.cache, 3));
  Rng rng(11);
  std::array<Poly, 3> g;
  for (auto& p : g) {
    p = Poly::constant(rng.small_int(-2, 2));
    p = p + rng.small_int(-2, 2) * Poly::var(0) * Poly::var(1) * Poly::var(2);
    p = p + rng.small_int(-2, 2) * Poly::var(1) * Poly::var(1);
  }
  std::vector<Poly> epsg(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) epsg[3 * i + j] = frac(1, 2) * (g[i].deriv(j) + g[j].deriv(i));
  PiecewiseField v = field_from_polys(volume_layout(fx.sc, 5, 9), epsg);
  PiecewiseField pv = p1.apply(v);
  LinearMap inc = op_inc(volume_layout(fx.sc, 3, 9));
  for (const auto& x : mul(inc.m, pv.coef)) CHECK(x == 0);
}
