#ifndef WFELA_WFMESH_HPP
#define WFELA_WFMESH_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wfela/geometry.hpp"

namespace wfela {

struct MacroMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  /// Optional split points z_T (one slot per tet; unset = incenter/centroid).
  std::vector<std::optional<Vec3>> interior_points;

  /// Non-degenerate tets, conforming shared faces, face-connected.
  void validate() const;
};

struct IncenterResult {
  Vec3 point;
  bool exact;  // false: the incenter is irrational, point is the centroid surrogate
};

/// Area-weighted vertex average; exact when all four face areas are rational,
/// otherwise a certified-interior surrogate (centroid) with exact=false.
IncenterResult incenter(const std::array<Vec3, 4>& tet);

/// Tangential frame data of a macro face, all unnormalized rational.
struct Frame {
  Vec3 n;        // raw normal, outward from the first adjacent tet
  Rational nn;   // n . n
  Vec3 b1, b2;   // rational tangent basis of the face plane
  Rational g11, g12, g22;  // Gram matrix of (b1, b2)

  /// Tangential projector applied to a vector: Qv = v - n (n.v)/nn.
  Vec3 Q(const Vec3& v) const { return v - (dot(n, v) / nn) * n; }
  /// Normal projector: Pv = n (n.v)/nn.
  Vec3 P(const Vec3& v) const { return (dot(n, v) / nn) * n; }
};

struct CtTri {
  std::array<long, 3> pts;  // global point ids, ascending
  std::array<int, 2> cell{-1, -1};  // adjacent cell per macro side
};

/// Interior Clough-Tocher edge of a macro face: e = [m_F, v].
struct CtEdge {
  int face = -1;
  long p_m = -1, p_v = -1;
  Vec3 t_raw;  // p_v - p_m  (oriented away from m_F)
  Vec3 s_raw;  // n_face x t_raw
  int q1 = -1, q2 = -1;  // the two CT triangles of the face sharing e (local 0..2)
};

struct MacroFace {
  std::array<int, 3> verts;   // macro vertex indices, ascending
  std::array<int, 2> tet{-1, -1};
  long m_point = -1;
  Frame frame;
  std::array<CtTri, 3> tris;
  std::array<int, 3> ct_edges;
  bool interior() const { return tet[1] >= 0; }
};

struct Cell {
  std::array<long, 4> pts;  // global point ids, ascending
  int parent_tet = -1;
  int parent_face = -1;  // macro face carrying this cell's boundary CT triangle
};

/// Interior 2D interface of the refined complex.
struct Interface {
  int cellA = -1, cellB = -1;
  std::array<long, 3> pts;  // ascending
  Vec3 n_raw;               // normal, outward from cellA
};

/// Trace slots of the theta_e functional (four (cell, CT-triangle) traces).
struct JumpPairing {
  int ct_edge = -1;
  // [side][which triangle]: cell adjacent to Q1/Q2 on macro side 0/1; side 1
  // entries are -1 for boundary faces.
  std::array<std::array<int, 2>, 2> cell_of;
};

enum class Level { Macro, Split };

struct SplitOptions {
  /// Face split point overrides keyed by the sorted macro vertex triple.
  std::map<std::array<int, 3>, Vec3> face_points;
};

struct SplitComplex {
  MacroMesh macro;
  std::vector<Vec3> points;   // macro vertices, then one z_T per tet, then one m_F per face
  std::vector<long> z_point;  // per tet
  std::vector<bool> z_exact_incenter;
  std::vector<MacroFace> faces;
  std::vector<std::array<int, 2>> macro_edges;  // ascending pairs
  std::vector<Cell> cells;
  std::vector<Interface> interfaces;
  std::vector<CtEdge> ct_edges;

  long n_points() const { return static_cast<long>(points.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  /// Simplices of dimension s, each as an ascending vertex/point id tuple.
  std::vector<std::vector<long>> skeleton(int s, Level level, bool interior_only) const;

  /// Interior CT edges over interior macro faces only: E(T_h^wf).
  std::vector<int> global_ct_edge_set() const;

  JumpPairing theta_slots(int ct_edge) const;

  /// Cells of tet t whose CT triangle lies on face f, ordered by triangle.
  std::array<int, 3> face_cells(int face, int side) const;
};

/// Worsey-Farin refinement of a full macro mesh (interior face points from
/// incenter segments, validated; boundary face points are barycenters unless
/// overridden).  Throws std::runtime_error naming the offending entity.
SplitComplex wf_split_global(const MacroMesh& mesh, const SplitOptions& opt = {});

/// Single-tet split with optional explicit interior and face points.
SplitComplex wf_split_local(const std::array<Vec3, 4>& tet, const std::optional<Vec3>& z = std::nullopt,
                            const std::optional<std::array<Vec3, 4>>& m = std::nullopt);

// Builtin geometries.
MacroMesh builtin_mesh(const std::string& name);  // disphenoid | reftet | twotet | cube6
std::array<Vec3, 4> disphenoid_vertices();
std::array<Vec3, 4> reference_tet_vertices();

// JSON mesh interchange.
MacroMesh mesh_from_json(const std::string& text);
std::string split_to_json(const SplitComplex& sc);

}  // namespace wfela

#endif
