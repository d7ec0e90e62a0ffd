#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "wfela/identities.hpp"

using namespace wfela;

TEST_CASE("seeded identity suite: 20 random degree-4 fields, all exact") {
  SplitComplex sc = wf_split_local(disphenoid_vertices());
  SpaceCache cache(sc);
  IdentitySuiteReport rep = identity_suite(cache, 20, 4, 4242);
  CHECK(rep.identities.size() >= 30);
  for (const auto& i : rep.identities) {
    INFO(i.identity);
    CHECK(i.failures == 0);
  }
}
