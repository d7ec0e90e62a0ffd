#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "wfela/fespaces.hpp"

using namespace wfela;

namespace {

struct Fx {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache{sc};
};

}  // namespace

TEST_CASE("Table 1 on a CT face, r = 1..5") {
  Fx fx;
  const char* rows[] = {"V", "Vr", "L", "Lr", "S", "R0", "Q1"};
  for (int r = 1; r <= 5; ++r) {
    for (const char* row : rows) {
      for (int k = 0; k <= 2; ++k) {
        DimFormula f = table1_dim(row, k, r);
        if (!f.valid) continue;
        TableEntry e = table1_space(row, k, r);
        const FESpace& s = fx.cache.face_space(e.space, e.degree, 0);
        INFO("row ", row, " k=", k, " r=", r, " space=", e.space);
        CHECK(s.dim == f.value);
      }
    }
    // V1curl and V1div have equal dimension.
    CHECK(fx.cache.face_space("V1curl", r, 0).dim == fx.cache.face_space("V1div", r, 0).dim);
    CHECK(fx.cache.face_space("V1curlr", r, 0).dim == fx.cache.face_space("V1divr", r, 0).dim);
  }
  // Spot examples: dim L0_3 = 19, dim V1_2 = 27, dim S0_3 = 12, dim R0_4 = 9,
  // dim Q1_1 = 15.
  CHECK(fx.cache.face_space("L0", 3, 0).dim == 19);
  CHECK(fx.cache.face_space("V1div", 2, 0).dim == 27);
  CHECK(fx.cache.face_space("S0", 3, 0).dim == 12);
  CHECK(fx.cache.face_space("R0", 4, 0).dim == 9);
  CHECK(fx.cache.face_space("Q1", 1, 0).dim == 15);
}

TEST_CASE("Table 1 independent of the face chosen") {
  Fx fx;
  for (int face = 1; face < 4; ++face) {
    CHECK(fx.cache.face_space("S0", 3, face).dim == 12);
    CHECK(fx.cache.face_space("Q1", 2, face).dim == 36);
    CHECK(fx.cache.face_space("Qinc1sr", 3, face).dim > 0);
  }
}

TEST_CASE("2D elasticity space dimensions: Qperp and the direct sum (3.2)") {
  Fx fx;
  for (int r = 1; r <= 3; ++r) {
    const FESpace& q1 = fx.cache.face_space("Q1", r, 0);
    const FESpace& q1t = fx.cache.face_space("Q1t", r, 0);
    const FESpace& qp = q_perp(fx.cache, r, 0);
    CHECK(qp.dim == q1.dim - q1t.dim);
    CHECK(qp.dim == 3 * r);
    // Q1 = Qperp + Q1t by rank.
    CHECK(rank_of(hcat(qp.basis, q1t.basis), RankMode::Exact).rank == q1.dim);
    // Mass-orthogonality is exact.
    DenseMatrix G = mass_matrix(q1.layout).dense();
    CHECK(is_zero(q1t.basis.transposed() * (G * qp.basis)));
  }
}

TEST_CASE("Table 2 on the disphenoid and the reference tet, small r") {
  for (const char* geom : {"disphenoid", "reftet"}) {
    SplitComplex sc = wf_split_global(builtin_mesh(geom));
    SpaceCache cache(sc);
    const char* rows[] = {"V", "Vr", "L", "Lr", "cVr", "S", "Sr"};
    for (int r = 1; r <= 3; ++r) {
      for (const char* row : rows) {
        for (int k = 0; k <= 3; ++k) {
          DimFormula f = table2_dim(row, k, r);
          if (!f.valid) continue;
          TableEntry e = table2_space(row, k, r);
          const FESpace& s = cache.tet_space(e.space, e.degree);
          INFO("geom ", geom, " row ", row, " k=", k, " r=", r, " space=", e.space);
          CHECK(s.dim == f.value);
        }
      }
    }
    // Spot values from the spec: V0_3 = 91, S0_3 = 28, ring cV2_1 = 38, V3_0 = 12.
    CHECK(cache.tet_space("L0", 3).dim == 91);
    CHECK(cache.tet_space("S0", 3).dim == 28);
    CHECK(cache.tet_space("cV2r", 1).dim == 38);
    CHECK(cache.tet_space("V3", 0).dim == 12);
  }
}

TEST_CASE("U dimensions at r = 3") {
  Fx fx;
  const long expect[4] = {210, 294, 126, 36};
  const long expect_ring[4] = {0, 0, 30, 30};
  for (int k = 0; k < 4; ++k) {
    TableEntry e = u_space(k, 3, false);
    CHECK(fx.cache.tet_space(e.space, e.degree).dim == expect[k]);
    CHECK(u_dim(k, 3, false).value == expect[k]);
    TableEntry er = u_space(k, 3, true);
    CHECK(fx.cache.tet_space(er.space, er.degree).dim == expect_ring[k]);
    CHECK(u_dim(k, 3, true).value == expect_ring[k]);
  }
}

TEST_CASE("inclusion chains of section 4.1 as rank identities") {
  Fx fx;
  const int r = 2;
  auto subset = [&](const FESpace& a, const FESpace& b) {
    return rank_of(hcat(b.basis, a.basis), RankMode::Auto).rank == b.dim;
  };
  CHECK(subset(fx.cache.tet_space("S0", r), fx.cache.tet_space("L0", r)));
  CHECK(subset(fx.cache.tet_space("S1", r), fx.cache.tet_space("L1", r)));
  CHECK(subset(fx.cache.tet_space("L1", r), fx.cache.tet_space("V1", r)));
  // L2 = [L0]^3 subset cV2 subset V2.
  CHECK(subset(fx.cache.tet_space("L1", r), fx.cache.tet_space("cV2", r)));
  CHECK(subset(fx.cache.tet_space("cV2", r), fx.cache.tet_space("V2", r)));
  CHECK(subset(fx.cache.tet_space("cV3", r), fx.cache.tet_space("V3", r)));
}

TEST_CASE("bases satisfy their constraints exactly") {
  Fx fx;
  for (const char* n : {"L0", "V1", "V2", "S0", "S1", "cV2", "U2"}) {
    const FESpace& s = fx.cache.tet_space(n, 2);
    CHECK(is_zero(s.constraints * s.basis));
  }
  for (const char* n : {"L0", "V1div", "S0", "Q1", "Qinc1r"}) {
    const FESpace& s = fx.cache.face_space(n, 2, 0);
    CHECK(is_zero(s.constraints * s.basis));
  }
}

TEST_CASE("characterization of U1 (Theorem 4.7) at r = 3") {
  Fx fx;
  for (bool ring : {false, true}) {
    auto rows = characterization_check(fx.cache, 3, ring);
    for (const auto& c : rows) {
      INFO(c.name, " expected ", c.expected, " got ", c.got, " ring=", ring);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("projection of rigid displacements (Appendix B)") {
  Fx fx;
  for (const auto& c : proj_rigid_check(fx.cache)) {
    INFO(c.name, " expected ", c.expected, " got ", c.got);
    CHECK(c.pass);
  }
}
