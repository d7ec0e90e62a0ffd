#ifndef WFELA_DIFFOPS_HPP
#define WFELA_DIFFOPS_HPP

#include <string>

#include "wfela/bernstein.hpp"

namespace wfela {

/// An exact matrix between ambient coefficient spaces.
struct LinearMap {
  FieldLayout src, dst;
  SparseMatrix m;
};

LinearMap compose(const LinearMap& a, const LinearMap& b);  // a after b
LinearMap lm_sub(const LinearMap& a, const LinearMap& b);
LinearMap lm_scale(const Rational& c, const LinearMap& a);
std::vector<Rational> apply(const LinearMap& a, const PiecewiseField& f);
PiecewiseField apply_field(const LinearMap& a, const PiecewiseField& f);

// ---------------------------------------------------------------------------
// Pointwise value maps (ncomp_out x ncomp_in), applied per coefficient.

LinearMap value_op(const FieldLayout& src, int ncomp_out, const DenseMatrix& V);

DenseMatrix vmap_identity(int n);
DenseMatrix vmap_sym();                        // 9 -> 9
DenseMatrix vmap_skw();                        // 9 -> 9
DenseMatrix vmap_tau();                        // 9 -> 9 transpose
DenseMatrix vmap_tr();                         // 9 -> 1
DenseMatrix vmap_xi();                         // M' - tr(M) I
DenseMatrix vmap_xi_inv();                     // M' - tr(M)/2 I
DenseMatrix vmap_mskw();                       // 3 -> 9
DenseMatrix vmap_vskw();                       // 9 -> 3
DenseMatrix vmap_cross(const Vec3& a);         // 3 -> 3 : v -> a x v
DenseMatrix vmap_cross_right(const Vec3& a);   // 3 -> 3 : v -> v x a
DenseMatrix vmap_dot(const Vec3& a);           // 3 -> 1 : v -> a . v
DenseMatrix vmap_scalar_times(const Vec3& a);  // 1 -> 3 : s -> s a
DenseMatrix vmap_outer_left(const Vec3& a);    // 3 -> 9 : w -> a w'
DenseMatrix vmap_mat_vec(const Vec3& a);       // 9 -> 3 : M -> M a
DenseMatrix vmap_vec_mat(const Vec3& a);       // 9 -> 3 : M -> M' a
DenseMatrix vmap_proj_Q(const Frame& fr);      // 3 -> 3 tangential projector
DenseMatrix vmap_sandwich_QQ(const Frame& fr);  // 9 -> 9 : M -> Q M Q
DenseMatrix vmap_left(const DenseMatrix& A);    // 9 -> 9 : M -> A M
DenseMatrix vmap_right(const DenseMatrix& A);   // 9 -> 9 : M -> M A
DenseMatrix mat3(const Vec3& c0, const Vec3& c1, const Vec3& c2);  // columns
DenseMatrix q_matrix(const Frame& fr);          // 3x3 projector Q
DenseMatrix frobenius_with(const DenseMatrix& S);  // 9 -> 1 : M -> M : S

// ---------------------------------------------------------------------------
// Volume differential operators (also usable on face layouts, where the
// barycentric gradients are tangential so d/dx_j means (Q grad)_j).

LinearMap op_dirderiv(const FieldLayout& s, const Vec3& w);  // ncomp kept, r -> r-1
LinearMap op_grad_scalar(const FieldLayout& s);              // 1 -> 3
LinearMap op_grad_vec(const FieldLayout& s);                 // 3 -> 9, (grad v)_ij = dv_i/dx_j
LinearMap op_curl_vec(const FieldLayout& s);                 // 3 -> 3
LinearMap op_curl_mat(const FieldLayout& s);                 // 9 -> 9, row-wise
LinearMap op_div_vec(const FieldLayout& s);                  // 3 -> 1
LinearMap op_div_mat(const FieldLayout& s);                  // 9 -> 3, row-wise
LinearMap op_eps(const FieldLayout& s);                      // 3 -> 9, sym grad
LinearMap op_inc(const FieldLayout& s);                      // 9 -> 9, curl tau curl

// ---------------------------------------------------------------------------
// Surface operators on face layouts.  Each is the paper operator multiplied
// by the stated power of |n| so that all matrices stay rational ("raw").

LinearMap op_gradF_scalar(const FieldLayout& s);  // power 0
LinearMap op_gradF_vec(const FieldLayout& s);     // power 0 (tangent input)
LinearMap op_rotF_scalar(const FieldLayout& s);   // power +1: (Q grad phi) x n
LinearMap op_rotF_row(const FieldLayout& s);      // power +1: q -> sum t_i (rotF q_i)'
LinearMap op_curlF_vec(const FieldLayout& s);     // power +1: div_F(v x n)
LinearMap op_curlF_mat(const FieldLayout& s);     // power +1, row-wise
LinearMap op_divF_vec(const FieldLayout& s);      // power 0
LinearMap op_divF_mat(const FieldLayout& s);      // power 0, row-wise
LinearMap op_epsF(const FieldLayout& s);          // power 0
LinearMap op_airyF(const FieldLayout& s);         // power +2
LinearMap op_incF(const FieldLayout& s);          // power +2
LinearMap op_skew_scalar(const FieldLayout& s);   // power +1: phi -> -phi mskw(n)
LinearMap op_skew_mat(const FieldLayout& s);      // power +1: M -> -tr(mskw(n) M)
LinearMap op_perp(const FieldLayout& s);          // power +1: v -> v x n

const Frame& layout_frame(const FieldLayout& s);

// ---------------------------------------------------------------------------
// Traces

/// Trace of a volume field onto the CT split of a macro face (same degree).
LinearMap trace_to_face(const FieldLayout& vol, int face, int side);

/// Trace of a volume field onto an edge given by two point ids (from the
/// lowest-index cell containing the edge).
LinearMap trace_to_edge(const FieldLayout& vol, long pa, long pb);

/// Trace of a face field onto one of the three boundary edges of the face.
/// `bedge` indexes the boundary edge as the CT triangle it belongs to.
LinearMap face_trace_to_boundary_edge(const FieldLayout& facelay, int bedge);

/// Positively oriented raw tangent (w.r.t. the face frame normal) of the
/// boundary edge contained in CT triangle `bedge`.
Vec3 boundary_edge_tangent(const SplitComplex& sc, int face, int bedge);

}  // namespace wfela

#endif
