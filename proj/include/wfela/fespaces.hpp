#ifndef WFELA_FESPACES_HPP
#define WFELA_FESPACES_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "wfela/diffops.hpp"

namespace wfela {

struct SpaceDescriptor {
  std::string name;
  int r = 0;
  int face = -1;  // >= 0 for face-level spaces
};

/// A discrete space: ambient layout + exact constraint matrix + exact
/// nullspace basis (columns).  Image-form spaces carry only the basis.
struct FESpace {
  SpaceDescriptor desc;
  FieldLayout layout;
  SparseMatrix constraints;
  DenseMatrix basis;
  long dim = 0;
  bool image_form = false;
};

/// Builds and caches every named local space of the catalogs on one split
/// complex (single macro tet for tet-level spaces unless a tet is named).
class SpaceCache {
 public:
  explicit SpaceCache(const SplitComplex& sc);

  const SplitComplex& sc() const { return *sc_; }

  /// 2D catalog on the CT split of a macro face:
  ///   V2 V2r L0 L0r L1 L1r L2r V1div V1divr V1curl V1curlr S0 S0r R0 S1
  ///   Q1 Q1t Qperp Qinc1r Qinc1sr Q2r P1 RF
  const FESpace& face_space(const std::string& name, int r, int face);

  /// 3D catalog on the Worsey-Farin split of macro tet `tet`:
  ///   L0 L0r L1 L1r V1 V1r V2 V2r V3 V3r S0 S0r S1 S1r S2 S2r S3 S3r
  ///   cV2 cV2r cV3 cV3r U0 U0r U1 U1r U2 U2r U3 U3r R
  /// U spaces use the paper degree convention (catalog degree = the degree of
  /// the piecewise polynomials in the space itself).
  const FESpace& tet_space(const std::string& name, int r, int tet = 0);

 private:
  FESpace build_face(const std::string& name, int r, int face);
  FESpace build_tet(const std::string& name, int r, int tet);

  const SplitComplex* sc_;
  std::map<std::string, std::unique_ptr<FESpace>> cache_;
  // Per-tet extracted single-tet complexes of a multi-tet mesh.
  std::vector<std::shared_ptr<SplitComplex>> tet_complex_;
  std::vector<std::shared_ptr<SpaceCache>> tet_cache_;

 public:
  /// The single-tet complex carrying the same split geometry as macro tet
  /// `tet` of the global complex (identity for single-tet complexes).
  const SplitComplex& tet_complex(int tet);
  SpaceCache& tet_cache(int tet);
  /// Offset of a tet's coefficient block in a global volume layout.
  long tet_offset(int tet, const FieldLayout& global_layout) const;
};

// ---------------------------------------------------------------------------
// Generic building blocks (used by the DOF and complex machinery too).

FESpace make_space(SpaceDescriptor desc, FieldLayout layout, std::vector<SparseMatrix> blocks);
FESpace free_space(SpaceDescriptor desc, FieldLayout layout);
FESpace null_space(SpaceDescriptor desc, FieldLayout layout);
FESpace image_space(const std::string& name, const LinearMap& M, const FESpace& src);
FESpace tensor_to_vector(const std::string& name, const FESpace& scalar);  // ncomp 1 -> 3
FESpace tensor_to_matrix(const std::string& name, const FESpace& vec);     // rows in X: 3 -> 9
FESpace span_space(SpaceDescriptor desc, const FieldLayout& l, const std::vector<PiecewiseField>& gens);

/// Interface-jump rows: for every interior interface, rows L(iface) * (trace_A - trace_B).
SparseMatrix iface_rows(const FieldLayout& l, const std::function<DenseMatrix(const Interface&)>& L);
/// Boundary-trace rows L(face) * trace over the CT triangles of the listed macro faces.
SparseMatrix bdry_rows(const FieldLayout& l, const std::vector<int>& faces,
                       const std::function<DenseMatrix(const MacroFace&)>& L);
/// Macro-face CT-edge jump rows on side `side` of each listed face.
SparseMatrix ct_edge_rows(const FieldLayout& l, const std::vector<int>& faces, int side,
                          const std::function<DenseMatrix(const CtEdge&)>& L);
/// theta_e rows (four-trace alternating sum) for the listed CT edges.
SparseMatrix theta_rows(const FieldLayout& l, const std::vector<int>& ct_edges,
                        const std::function<DenseMatrix(const CtEdge&)>& L);
/// Moment rows against explicit test fields (componentwise contraction).
SparseMatrix moment_rows(const FieldLayout& l, const std::vector<PiecewiseField>& tests);
/// Face-layout edge-jump rows across the interior CT edges of the face.
SparseMatrix face_edge_rows(const FieldLayout& l, const std::function<DenseMatrix(const CtEdge&)>& L);
/// Face-layout boundary rows on the three boundary edges.
SparseMatrix face_bdry_rows(const FieldLayout& l, const std::function<DenseMatrix(int tri)>& L);

/// Tangent-component tensors on a face: columns phi*b_k (scalar input) or
/// b_k (x) w (vector input, rows in the input space).
FESpace face_tensor_tangent(const std::string& name, const FESpace& scalar);
FESpace face_tensor_tangent_matrix(const std::string& name, const FESpace& vec);

/// Rigid displacement fields a + b x x as coefficient columns of a layout.
std::vector<PiecewiseField> rigid_fields(const FieldLayout& l);
/// Face rigid fields R(F) (two tangents and the in-plane rotation).
std::vector<PiecewiseField> face_rigid_fields(const FieldLayout& l);
/// P1(F): affine scalars on a face layout.
std::vector<PiecewiseField> face_p1_fields(const FieldLayout& l);

// ---------------------------------------------------------------------------
// Verification helpers of the fespaces module.

/// Q_r^perp(F^ct): mass-orthogonal complement of Q~1_r inside Q1_r.
const FESpace& q_perp(SpaceCache& cache, int r, int face);

struct CheckRow {
  std::string name;
  std::string expected, got;
  bool pass = true;
};

/// Theorem 4.7: U1 built as sym image and as constraint space coincide.
std::vector<CheckRow> characterization_check(SpaceCache& cache, int r, bool ring);

/// Appendix B: dim P_U R = 6 and U3_0 = P_U R + ring-U3_0 (direct sum by rank).
std::vector<CheckRow> proj_rigid_check(SpaceCache& cache);

// ---------------------------------------------------------------------------
// Dimension formulas (validity-gated).

struct DimFormula {
  long value = 0;
  bool valid = false;
};

/// Table 1 rows: "V","Vr","L","Lr","S","R0","Q1"; columns k = 0..2.
DimFormula table1_dim(const std::string& row, int k, int r);
/// Table 2 rows: "V","Vr","L","Lr","cVr","S","Sr"; columns k = 0..3.
DimFormula table2_dim(const std::string& row, int k, int r);
/// Section 4.3 U-dimensions, k = 0..3, r >= 3 (degree convention of the paper).
DimFormula u_dim(int k, int r, bool ring);

/// The catalog space that realizes a table row/column, with its polynomial
/// degree; names match the SpaceCache catalogs.
struct TableEntry {
  std::string space;
  int degree;
};
TableEntry table1_space(const std::string& row, int k, int r);
TableEntry table2_space(const std::string& row, int k, int r);
TableEntry u_space(int k, int r, bool ring);

}  // namespace wfela

#endif
