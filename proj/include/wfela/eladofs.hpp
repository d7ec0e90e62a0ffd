#ifndef WFELA_ELADOFS_HPP
#define WFELA_ELADOFS_HPP

#include <cstdint>
#include <memory>

#include "wfela/complexes.hpp"

namespace wfela {

/// One family of degrees of freedom (a block of functionals sharing the same
/// recipe and entity kind).  The row builder accepts any volume layout of the
/// matching value shape, so the same functionals apply to the target space
/// and to higher-degree smooth inputs.
struct DofFamily {
  std::string tag;     // e.g. "U1:dofd"
  std::string entity;  // vertex | edge | face | interior
  long count = 0;
  std::function<SparseMatrix(const FieldLayout&)> rows;
};

struct DofSet {
  std::string space;  // U0 | U1 | U2 | U3
  int r = 0;          // paper parameter (target degrees r+1, r, r-2, r-3)
  const FESpace* target = nullptr;
  std::vector<DofFamily> families;

  long total() const;
  SparseMatrix rows_for(const FieldLayout& l) const;
  /// Square DOF matrix (functionals x target basis).
  DenseMatrix matrix() const;
};

DofSet dofs_u0(SpaceCache& cache, int r);
DofSet dofs_u1(SpaceCache& cache, int r);
DofSet dofs_u2(SpaceCache& cache, int r);
DofSet dofs_u3(SpaceCache& cache, int r);
DofSet dofs_of(SpaceCache& cache, const std::string& space, int r);

/// Unisolvence: square and nonsingular.  A nonzero determinant mod a random
/// prime is an exact certificate; two primes are tried before escalating to
/// an exact elimination.
struct UnisolvenceReport {
  std::string space;
  int r = 0;
  long dim = 0, dof_count = 0;
  bool square = false, nonsingular = false;
  std::vector<std::pair<std::string, long>> family_counts;
  long vertex_dofs = 0, edge_dofs = 0, face_dofs = 0, interior_dofs = 0;
  std::string mode;
  bool pass() const { return square && nonsingular; }
};
UnisolvenceReport unisolvence(SpaceCache& cache, const std::string& space, int r);

/// The projection induced by a unisolvent DOF set.
class Projection {
 public:
  Projection(SpaceCache& cache, DofSet dofs);  // throws if the DOF matrix is singular

  const DofSet& dofs() const { return dofs_; }
  /// Project a smooth input given as an exact field of degree >= target's.
  PiecewiseField apply(const PiecewiseField& input) const;
  /// Coefficients in the target basis (for equality tests).
  std::vector<Rational> coefficients(const PiecewiseField& input) const;

 private:
  DofSet dofs_;
  std::unique_ptr<LuFactors> lu_;
};

struct CommutingReport {
  int r = 0, trials = 0;
  std::uint64_t seed = 0;
  long failures = 0;
  std::vector<CheckRow> checks;
  bool pass() const { return failures == 0; }
};

/// Theorem 6.1: eps(P0 u) = P1 eps(u), inc(P1 v) = P2 inc(v),
/// div(P2 w) = P3 div(w) for seeded random polynomial inputs of degree r+2.
CommutingReport commuting_suite(SpaceCache& cache, int r, int trials, std::uint64_t seed);

}  // namespace wfela

#endif
