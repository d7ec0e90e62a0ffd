#ifndef WFELA_COMPLEXES_HPP
#define WFELA_COMPLEXES_HPP

#include <optional>

#include "wfela/fespaces.hpp"

namespace wfela {

/// A space in a sequence.  Three representations:
///  - plain: explicit basis columns (local spaces),
///  - factored: basis = loc * ker with ker = nullspace(glue * loc)
///    (glued global spaces; exact basis never materialized),
///  - free: the whole ambient space.
struct Node {
  std::string label;
  long ambient = 0;
  bool free_form = false;
  bool factored = false;
  DenseMatrix basis;     // plain
  SparseMatrix loc;      // factored: ambient x glued (block diagonal local bases)
  DenseMatrix ker;       // factored: glued x dim
  SparseMatrix glue;     // factored: the glue system over glued coordinates
  SparseMatrix constraints;  // ambient membership rows (constraint-form spaces)
  bool has_constraints = false;
  long dim_override = -1;  // for factored spans that are not injective images

  long dim() const {
    if (dim_override >= 0) return dim_override;
    return free_form ? ambient : (factored ? ker.cols : basis.cols);
  }
};

Node node_of(const FESpace& s, const std::string& label = "");
Node direct_sum(const std::string& label, const Node& a, const Node& b);
Node node_tensor_vector(const std::string& label, const Node& scalar);  // 1 -> 3 comps
Node node_tensor_matrix(const std::string& label, const Node& vec);     // rows-in-X: 3 -> 9

/// rank of M restricted to the node's span (mode: exact for small, two-prime
/// modular otherwise; factored nodes are always modular).
long image_rank(const SparseMatrix& M, const Node& X, RankMode mode);

struct SlotReport {
  std::string at;
  long in_rank = 0, out_kernel = 0;
  bool pass = false;
};

struct ExactnessReport {
  std::string name;
  int r = 0;
  bool complex_pass = true;
  bool membership_pass = true;
  bool head_pass = true;
  bool tail_checked = false, tail_pass = true;
  long head_dim = -1, head_expected = 0;
  long tail_rank = -1, tail_expected = -1;
  std::vector<SlotReport> slots;
  std::string mode;
  bool pass() const;
};

struct ComplexSpec {
  std::string name;
  int r = 0;
  std::vector<Node> spaces;
  std::vector<SparseMatrix> maps;  // maps[k]: ambient_k -> ambient_{k+1}
  long head_expected = 0;
  bool tail_surjective = false;
  /// Augmentation representatives inside spaces[0] (must lie in ker maps[0]).
  DenseMatrix head_fields;
  /// Optional membership certificates: rows over the SOURCE ambient whose
  /// exact vanishing on spaces[k] certifies maps[k](spaces[k]) lies in
  /// spaces[k+1] (used when spaces[k+1] has no ambient constraint rows).
  std::vector<std::optional<SparseMatrix>> membership_rows;
};

ExactnessReport check_exact(const ComplexSpec& cs, RankMode mode = RankMode::Auto);
bool check_complex(const ComplexSpec& cs);

// ---------------------------------------------------------------------------
// Sequence catalog

std::vector<std::string> sequence_names();
int sequence_min_r(const std::string& name);
bool sequence_is_global(const std::string& name);

/// Local sequences are built on face 0 (2D names) or the single macro tet.
ComplexSpec build_sequence(SpaceCache& cache, const std::string& name, int r);

ExactnessReport catalog_run(SpaceCache& cache, const std::string& name, int r,
                            RankMode mode = RankMode::Auto);

// ---------------------------------------------------------------------------
// Global glued spaces

class GlobalSpaces {
 public:
  explicit GlobalSpaces(SpaceCache& cache);

  /// names: gS0 gS1 gL0 gV2s gV3s gU2 (glued), gV3 gU3 (free),
  /// with the degree given explicitly.
  const Node& node(const std::string& name, int degree);

  SpaceCache& cache() { return *cache_; }

 private:
  Node build(const std::string& name, int degree);
  SpaceCache* cache_;
  std::map<std::string, Node> cache_nodes_;
};

/// Global sequences (globalseq1, globalseq2, globalpreseq, globalelseq).
ComplexSpec build_global_sequence(GlobalSpaces& gs, const std::string& name, int r);

// ---------------------------------------------------------------------------
// Derived-complex (BGG) constructor

struct BggDiagram {
  std::vector<Node> top, bottom;          // 4 spaces each
  std::vector<SparseMatrix> top_maps;     // 3
  std::vector<SparseMatrix> bottom_maps;  // 3
  std::vector<SparseMatrix> connect;      // s0, s1, s2
  SparseMatrix s1_inverse;                // independently computed inverse of s1
  std::string name;
  int r = 0;
};

struct BggReport {
  std::vector<CheckRow> checks;
  ComplexSpec derived;
  bool pass() const;
};

/// Verifies the commuting squares and the bijectivity of s1, then emits the
/// derived sequence with middle map t1 s1^{-1} r1 and stacked end maps.
/// Throws std::runtime_error naming the failing square or a singular s1.
BggReport derive_bgg(const BggDiagram& d);

/// Diagrams (4.9)/(4.10) assembled from the catalog, derived, and compared
/// map-for-map against the directly built preseq/preseqb.
std::vector<CheckRow> bgg_check(SpaceCache& cache, int r, bool ring, RankMode mode = RankMode::Auto);

}  // namespace wfela

#endif
