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
}

}  // namespace

TEST_CASE("global sequences on the two-tet mesh at r = 3") {
  SplitComplex sc = wf_split_global(builtin_mesh("twotet"));
  SpaceCache cache(sc);
  GlobalSpaces gs(cache);
  for (const char* name : {"globalseq1", "globalseq2", "globalpreseq", "globalelseq"}) {
    expect_pass(check_exact(build_global_sequence(gs, name, 3)));
  }
}

TEST_CASE("global sequences on the 6-tet cube at r = 3") {
  SplitComplex sc = wf_split_global(builtin_mesh("cube6"));
  SpaceCache cache(sc);
  GlobalSpaces gs(cache);
  for (const char* name : {"globalseq1", "globalseq2", "globalpreseq", "globalelseq"}) {
    expect_pass(check_exact(build_global_sequence(gs, name, 3)));
  }
}
