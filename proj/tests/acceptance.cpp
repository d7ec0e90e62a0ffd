// Acceptance suite: every finitely-checkable claim the toolkit certifies,
// one pass/fail line per criterion, all tolerances zero (exact arithmetic;
// large checks use two-prime modular rank as configured in rlinalg).
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "wfela/complexes.hpp"
#include "wfela/eladofs.hpp"
#include "wfela/identities.hpp"

using namespace wfela;

namespace {

int g_failures = 0;

struct Criterion {
  std::string title;
  bool ok = true;
  std::vector<std::string> notes;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit Criterion(std::string t) : title(std::move(t)) {}
  void check(bool pass, const std::string& what) {
    if (!pass) {
      ok = false;
      notes.push_back(what);
    }
  }
  void finish(int idx) {
    double s = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                   .count() /
               1000.0;
    std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", idx, title.c_str(), s);
    for (const auto& n : notes) std::printf("         %s\n", n.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

void expect_exact(Criterion& c, SpaceCache& cache, const std::string& name, int r) {
  ExactnessReport rep = catalog_run(cache, name, r);
  c.check(rep.pass(), name + " r=" + std::to_string(r) + (rep.pass() ? "" : " FAILED"));
}

}  // namespace

int main() {
  set_prime_seed(20260809);

  // ---- 1. Dimension reproduction ----
  {
    Criterion c("dimension tables (Table 1 r=1..5; Table 2 per-row validity on two geometries; U dims r=3,4)");
    {
      SplitComplex sc = wf_split_local(disphenoid_vertices());
      SpaceCache cache(sc);
      for (int r = 1; r <= 5; ++r) {
        for (const char* row : {"V", "Vr", "L", "Lr", "S", "R0", "Q1"}) {
          for (int k = 0; k <= 2; ++k) {
            DimFormula f = table1_dim(row, k, r);
            if (!f.valid) continue;
            TableEntry e = table1_space(row, k, r);
            long got = cache.face_space(e.space, e.degree, 0).dim;
            c.check(got == f.value, std::string("Table1 ") + row + "^" + std::to_string(k) +
                                        " r=" + std::to_string(r) + ": " + std::to_string(got) + " != " +
                                        std::to_string(f.value));
          }
        }
      }
    }
    for (const char* geom : {"disphenoid", "reftet"}) {
      SplitComplex sc = wf_split_global(builtin_mesh(geom));
      SpaceCache cache(sc);
      for (int r = 1; r <= 4; ++r) {
        for (const char* row : {"V", "Vr", "L", "Lr", "cVr", "S", "Sr"}) {
          for (int k = 0; k <= 3; ++k) {
            DimFormula f = table2_dim(row, k, r);
            if (!f.valid) continue;
            if (std::string(row) == "cVr" && k < 2) continue;
            TableEntry e = table2_space(row, k, r);
            long got = cache.tet_space(e.space, e.degree).dim;
            c.check(got == f.value, std::string(geom) + " Table2 " + row + "^" + std::to_string(k) +
                                        " r=" + std::to_string(r) + ": " + std::to_string(got) + " != " +
                                        std::to_string(f.value));
          }
        }
      }
      for (int r = 3; r <= 4; ++r) {
        for (bool ring : {false, true}) {
          for (int k = 0; k <= 3; ++k) {
            DimFormula f = u_dim(k, r, ring);
            TableEntry e = u_space(k, r, ring);
            long got = cache.tet_space(e.space, e.degree).dim;
            c.check(got == f.value, std::string(geom) + (ring ? " ring U^" : " U^") + std::to_string(k) +
                                        " r=" + std::to_string(r) + ": " + std::to_string(got) + " != " +
                                        std::to_string(f.value));
          }
        }
      }
    }
    c.finish(1);
  }

  // ---- 2. Local exactness suites ----
  {
    Criterion c("local exactness: 2D catalog r=1..4, pre-elasticity r=2..4, elasticity r=3 and r=4");
    SplitComplex sc = wf_split_local(disphenoid_vertices());
    SpaceCache cache(sc);
    for (const char* name : {"alfseq1", "alfseq2", "2dbdryseq1", "2dbdryseq2", "altalfseq1", "altalfseq2",
                             "alt2dbdryseq1", "alt2dbdryseq2", "gradcurlsven"})
      for (int r = 1; r <= 4; ++r) expect_exact(c, cache, name, r);
    for (const char* name : {"2dpreelasvenb", "2dpreelaairy"})
      for (int r = 2; r <= 4; ++r) expect_exact(c, cache, name, r);
    for (const char* name : {"elaseqsvenb", "elaseqairy", "seq0", "seq0b", "seq1", "seq1b", "seq2", "seq2b",
                             "preseq", "preseqb", "elseq", "elseqb"})
      for (int r = 3; r <= 4; ++r) expect_exact(c, cache, name, r);
    c.finish(2);
  }

  // ---- 3. Global suites ----
  {
    Criterion c("global exactness on the two-tet mesh and the 6-tet cube at r=3");
    for (const char* geom : {"twotet", "cube6"}) {
      SplitComplex sc = wf_split_global(builtin_mesh(geom));
      SpaceCache cache(sc);
      GlobalSpaces gs(cache);
      for (const char* name : {"globalseq1", "globalseq2", "globalpreseq", "globalelseq"}) {
        ExactnessReport rep = check_exact(build_global_sequence(gs, name, 3));
        c.check(rep.pass(), std::string(geom) + " " + name + (rep.pass() ? "" : " FAILED"));
        if (std::string(name) == "globalpreseq")
          c.check(rep.head_dim == 6, std::string(geom) + " globalpreseq head kernel = 6");
      }
    }
    c.finish(3);
  }

  // ---- 4. DOF unisolvence ----
  {
    Criterion c("DOF unisolvence: counts (210,294,126,36) at r=3 and (444,690,396,144) at r=4, U2 audit");
    SplitComplex sc = wf_split_local(disphenoid_vertices());
    SpaceCache cache(sc);
    const long expect3[4] = {210, 294, 126, 36};
    const long expect4[4] = {444, 690, 396, 144};
    const char* spaces[4] = {"U0", "U1", "U2", "U3"};
    for (int k = 0; k < 4; ++k) {
      for (int r : {3, 4}) {
        UnisolvenceReport rep = unisolvence(cache, spaces[k], r);
        long expect = (r == 3 ? expect3 : expect4)[k];
        c.check(rep.dof_count == expect && rep.dim == expect,
                std::string(spaces[k]) + " r=" + std::to_string(r) + " count " +
                    std::to_string(rep.dof_count) + " != " + std::to_string(expect));
        c.check(rep.nonsingular, std::string(spaces[k]) + " r=" + std::to_string(r) + " singular");
        if (k == 2) {
          c.check(rep.vertex_dofs == 0, "U2 has vertex dofs");
          c.check(rep.edge_dofs == 0, "U2 has edge dofs");
        }
      }
    }
    c.finish(4);
  }

  // ---- 5. Commuting diagram ----
  {
    Criterion c("commuting projections (Theorem 6.1), 5 seeded degree-(r+2) inputs at r=3, exact");
    SplitComplex sc = wf_split_local(disphenoid_vertices());
    SpaceCache cache(sc);
    CommutingReport rep = commuting_suite(cache, 3, 5, 7);
    c.check(rep.failures == 0, "failures: " + std::to_string(rep.failures));
    c.check(static_cast<int>(rep.checks.size()) == 15, "expected 15 identity checks");
    c.finish(5);
  }

  // ---- 6. Identity suite ----
  {
    Criterion c("calculus identity suite, 20 seeded random fields, exact");
    SplitComplex sc = wf_split_local(disphenoid_vertices());
    SpaceCache cache(sc);
    IdentitySuiteReport rep = identity_suite(cache, 20, 4, 99);
    for (const auto& i : rep.identities)
      c.check(i.pass(), i.identity + ": " + std::to_string(i.failures) + " failures");
    c.finish(6);
  }

  // ---- 7. Appendix B ----
  {
    Criterion c("projection of rigid motions: dim P_U R = 6 and U3_0 = P_U R (+) ring U3_0");
    SplitComplex sc = wf_split_local(disphenoid_vertices());
    SpaceCache cache(sc);
    for (const auto& row : proj_rigid_check(cache)) c.check(row.pass, row.name);
    c.finish(7);
  }

  // ---- 8. BGG constructor ----
  {
    Criterion c("derived-complex constructor reproduces preseq/preseqb from diagrams (4.9)/(4.10) at r=3");
    SplitComplex sc = wf_split_local(disphenoid_vertices());
    SpaceCache cache(sc);
    for (bool ring : {false, true})
      for (const auto& row : bgg_check(cache, 3, ring))
        c.check(row.pass, std::string(ring ? "(4.10) " : "(4.9) ") + row.name);
    c.finish(8);
  }

  if (g_failures == 0) {
    std::printf("acceptance: all 8 criteria PASS\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
