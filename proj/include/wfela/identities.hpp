#ifndef WFELA_IDENTITIES_HPP
#define WFELA_IDENTITIES_HPP

#include <cstdint>

#include "wfela/fespaces.hpp"

namespace wfela {

struct IdentityReport {
  std::string identity;
  int trials = 0;
  long failures = 0;
  bool pass() const { return failures == 0; }
};

struct IdentitySuiteReport {
  int trials = 0, degree = 0;
  std::uint64_t seed = 0;
  std::vector<IdentityReport> identities;
  long failures() const {
    long f = 0;
    for (const auto& i : identities) f += i.failures;
    return f;
  }
};

/// Verifies every calculus identity of the operator module on seeded random
/// rational fields (coefficientwise, exact); hypothesis-conditioned
/// identities draw their samples from the matching constrained spaces.
IdentitySuiteReport identity_suite(SpaceCache& cache, int trials, int degree, std::uint64_t seed);

}  // namespace wfela

#endif
