#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "wfela/complexes.hpp"

using namespace wfela;

namespace {

void expect_pass(const ExactnessReport& rep) {
  INFO("sequence ", rep.name, " r=", rep.r, " head ", rep.head_dim, "/", rep.head_expected, " complex=",
       rep.complex_pass, " member=", rep.membership_pass, " tail=", rep.tail_rank, "/", rep.tail_expected);
  for (const auto& s : rep.slots) {
    INFO("slot ", s.at, ": in_rank ", s.in_rank, " out_kernel ", s.out_kernel);
    CHECK(s.pass);
  }
  CHECK(rep.complex_pass);
  CHECK(rep.membership_pass);
  CHECK(rep.head_pass);
  if (rep.tail_checked) CHECK(rep.tail_pass);
  CHECK(rep.pass());
}

}  // namespace

TEST_CASE("2D de Rham sequences on the CT face, r = 1..3") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  for (const char* name : {"alfseq1", "alfseq2", "2dbdryseq1", "2dbdryseq2", "altalfseq1", "altalfseq2",
                           "alt2dbdryseq1", "alt2dbdryseq2", "gradcurlsven"}) {
    for (int r = 1; r <= 3; ++r) expect_pass(catalog_run(cache, name, r));
  }
}

TEST_CASE("2D pre-elasticity sequences (Lemma A.2) at r = 2, 3") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  for (int r = 2; r <= 3; ++r) {
    expect_pass(catalog_run(cache, "2dpreelasvenb", r));
    expect_pass(catalog_run(cache, "2dpreelaairy", r));
  }
}

TEST_CASE("2D elasticity sequences (Theorem 3.4) at r = 3") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  expect_pass(catalog_run(cache, "elaseqsvenb", 3));
  expect_pass(catalog_run(cache, "elaseqairy", 3));
}

TEST_CASE("3D de Rham sequences (Lemma 4.1) at r = 3") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  for (const char* name : {"seq0", "seq0b", "seq1", "seq1b", "seq2", "seq2b"})
    expect_pass(catalog_run(cache, name, 3));
}

TEST_CASE("rank of grad on L0_3 is 90 (Table 2 + exactness oracle)") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  ComplexSpec cs = build_sequence(cache, "seq0", 3);
  CHECK(cs.spaces[0].dim() == 91);
  long rk = image_rank(cs.maps[0], cs.spaces[0], RankMode::Auto);
  CHECK(rk == 90);
}

TEST_CASE("pre-elasticity sequences (Theorem 4.4) at r = 3") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  expect_pass(catalog_run(cache, "preseq", 3));
  expect_pass(catalog_run(cache, "preseqb", 3));
}

TEST_CASE("elasticity sequences (Theorem 4.6) at r = 3, slot dims pinned") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  ComplexSpec cs = build_sequence(cache, "elseq", 3);
  CHECK(cs.spaces[0].dim() == 210);
  CHECK(cs.spaces[1].dim() == 294);
  CHECK(cs.spaces[2].dim() == 126);
  CHECK(cs.spaces[3].dim() == 36);
  CHECK(cs.spaces[0].dim() - cs.spaces[1].dim() + cs.spaces[2].dim() - cs.spaces[3].dim() == 6);
  expect_pass(check_exact(cs));
  expect_pass(catalog_run(cache, "elseqb", 3));
}

TEST_CASE("BGG constructor reproduces preseq from diagram (4.9)/(4.10)") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  for (bool ring : {false, true}) {
    auto rows = bgg_check(cache, 3, ring);
    for (const auto& c : rows) {
      INFO(c.name, " ring=", ring, " expected=", c.expected, " got=", c.got);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("derive_bgg rejects a singular connecting map") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  auto vlay = [&](int d, int n) { return volume_layout(sc, d, n); };
  BggDiagram d;
  d.name = "broken";
  d.r = 3;
  auto tv = [&](const char* nm, int deg) {
    return node_of(tensor_to_vector(std::string(nm) + "v", cache.tet_space(nm, deg)));
  };
  auto tm = [&](const char* nm, int deg) {
    return node_of(tensor_to_matrix(std::string(nm) + "m", cache.tet_space(nm, deg)));
  };
  d.top = {tv("S0", 4), tm("S1", 3), tm("L1", 2), Node{}};
  d.top[3].ambient = vlay(1, 3).size();
  d.top[3].free_form = true;
  d.bottom = {tv("S0", 3), tm("L1", 2), tm("V2", 1), Node{}};
  d.bottom[3].ambient = vlay(0, 3).size();
  d.bottom[3].free_form = true;
  d.top_maps = {op_grad_vec(vlay(4, 3)).m, op_curl_mat(vlay(3, 9)).m, op_div_mat(vlay(2, 9)).m};
  d.bottom_maps = {op_grad_vec(vlay(3, 3)).m, op_curl_mat(vlay(2, 9)).m, op_div_mat(vlay(1, 9)).m};
  // Break s1: the zero map is certainly not a bijection (and breaks a square).
  d.connect = {scale(-1, value_op(vlay(3, 3), 9, vmap_mskw()).m),
               SparseMatrix(vlay(2, 9).size(), vlay(2, 9).size()), scale(2, value_op(vlay(1, 9), 3, vmap_vskw()).m)};
  d.s1_inverse = SparseMatrix::identity(vlay(2, 9).size());
  CHECK_THROWS_AS(derive_bgg(d), std::runtime_error);
}
