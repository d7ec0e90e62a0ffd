#ifndef WFELA_BERNSTEIN_HPP
#define WFELA_BERNSTEIN_HPP

#include <array>
#include <map>
#include <vector>

#include "wfela/geometry.hpp"
#include "wfela/linalg.hpp"
#include "wfela/wfmesh.hpp"

namespace wfela {

/// Multi-indices of length dim+1 summing to degree, lexicographically
/// descending; index 0 is the corner of vertex 0.  Cached per (dim, degree).
class MultiIndexSet {
 public:
  static const MultiIndexSet& get(int dim, int degree);

  long size() const { return static_cast<long>(idx_.size()); }
  const std::vector<int>& operator[](long k) const { return idx_[k]; }
  long find(const std::vector<int>& alpha) const;  // -1 if absent
  int dim() const { return dim_; }
  int degree() const { return degree_; }

 private:
  MultiIndexSet(int dim, int degree);
  int dim_, degree_;
  std::vector<std::vector<int>> idx_;
  std::map<std::vector<int>, long> lookup_;
};

inline long bern_count(int dim, int degree) { return MultiIndexSet::get(dim, degree).size(); }

/// Geometry of one simplex cell of a field layout.
struct CellGeom {
  int dim = 3;
  std::vector<long> pts;    // global point ids, ascending
  std::vector<Vec3> verts;  // coordinates, same order
  std::vector<Vec3> gradL;  // barycentric gradients (tangential for dim < 3)
  Rational measure;         // dim 3: exact volume; dim 2: area/|n_F| proxy; dim 1: 1
};

/// Where a layout's cells live.
enum class DomainKind { Volume, Face, Edge };

struct FieldLayout {
  const SplitComplex* sc = nullptr;
  DomainKind kind = DomainKind::Volume;
  int degree = 0;
  int ncomp = 1;  // 1 scalar, 3 vector, 9 matrix (row-major)
  int face = -1;  // macro face id for Face layouts
  std::vector<CellGeom> cells;

  long nbern() const { return bern_count(cells.empty() ? 3 : cells[0].dim, degree); }
  long size() const { return static_cast<long>(cells.size()) * nbern() * ncomp; }
  long index(int cell, long bern, int comp) const { return (cell * nbern() + bern) * ncomp + comp; }
  bool compatible(const FieldLayout& o) const {
    return kind == o.kind && degree == o.degree && ncomp == o.ncomp && face == o.face &&
           cells.size() == o.cells.size();
  }
};

FieldLayout volume_layout(const SplitComplex& sc, int degree, int ncomp);
FieldLayout face_layout(const SplitComplex& sc, int face, int degree, int ncomp);
FieldLayout edge_layout(const SplitComplex& sc, long pa, long pb, int degree, int ncomp);

struct PiecewiseField {
  FieldLayout layout;
  std::vector<Rational> coef;

  PiecewiseField() = default;
  explicit PiecewiseField(FieldLayout l) : layout(std::move(l)), coef(layout.size(), Rational(0)) {}
};

// ---------------------------------------------------------------------------
// Core Bernstein operations

/// Coefficient-extraction pairs for the trace of a cell's polynomial onto the
/// sub-simplex spanned by `subpts` (ascending subset of the cell's points):
/// (sub-simplex Bernstein position, cell Bernstein position).
std::vector<std::pair<long, long>> trace_pairs(int degree, const std::vector<long>& cellpts,
                                               const std::vector<long>& subpts);

/// Directional derivative matrix of one layout along a constant vector
/// (degree r -> r-1, componentwise).
SparseMatrix deriv_matrix(const FieldLayout& src, const Vec3& dir);

/// Degree elevation r -> r+1 on the same cells.
SparseMatrix elevation_matrix(const FieldLayout& src);

/// Exact integral of the componentwise product of two fields on a common
/// layout geometry (scalar result; faces use the area/|n_F| proxy measure).
Rational integrate_product(const PiecewiseField& a, const PiecewiseField& b);

/// Exact integral of a scalar field.
Rational integrate(const PiecewiseField& a);

/// Mass matrix of a layout (componentwise block diagonal).
SparseMatrix mass_matrix(const FieldLayout& l);

/// Pointwise evaluation of a field at a point of a cell given barycentric
/// coordinates (exact).
std::vector<Rational> eval_at(const PiecewiseField& f, int cell, const std::vector<Rational>& lambda);

/// Exact product of two scalar fields on the same cells (degree adds).
PiecewiseField product(const PiecewiseField& a, const PiecewiseField& b);

/// Edge-polynomial coefficients of theta_e applied to a scalar volume field:
/// the four-trace alternating sum of eq. (2.3) restricted to the CT edge.
/// For boundary faces only the first two traces contribute the plain jump.
std::vector<Rational> theta_eval(const PiecewiseField& vol_scalar, int ct_edge);

// ---------------------------------------------------------------------------
// Exact multivariate polynomials (inputs, test functions, samplers)

struct Poly {
  std::map<std::array<int, 3>, Rational> terms;  // exponent of x,y,z -> coeff

  static Poly constant(const Rational& c);
  static Poly var(int axis);
  Poly deriv(int axis) const;
  Rational eval(const Vec3& p) const;
  int degree() const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Rational& c, const Poly& a);

/// Exact Bernstein expansion of global polynomials (one per component) on a
/// layout; every polynomial must have degree <= layout.degree.
PiecewiseField field_from_polys(const FieldLayout& l, const std::vector<Poly>& comps);

/// Barycentric coordinate of `which` vertex of macro tet `t` as a Poly.
Poly macro_barycentric(const SplitComplex& sc, int tet, int which);

}  // namespace wfela

#endif
