#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supermoduli/superconf.hpp"
#include "supermoduli/trees.hpp"

namespace supermoduli {

/// Descriptor of a special point at a vertex: a marked point (label id)
/// or a nodal point toward a neighbor vertex.
struct SpecialRef {
  bool is_label = false;
  int id = 0;  // label index or neighbor vertex

  friend bool operator==(const SpecialRef& a, const SpecialRef& b) {
    return a.is_label == b.is_label && a.id == b.id;
  }
};

/// A nodal supercurve of genus zero modeled on a labeled tree: one copy
/// of P^{1|1} per vertex, nodal points per directed edge, marked points
/// per label. The reductions of the special points at each vertex are
/// pairwise distinct.
struct NodalCurve {
  LabeledTree tree;
  std::map<std::pair<int, int>, ProjectivePoint> nodes;
  std::map<int, ProjectivePoint> marks;

  NodalCurve() = default;
  /// min_separation gates the distinctness check; deep bubbling tails
  /// legitimately bring reductions close together.
  NodalCurve(LabeledTree t, std::map<std::pair<int, int>, ProjectivePoint> n,
             std::map<int, ProjectivePoint> m, double min_separation = 1e-8);

  void validate(double min_separation = 1e-8) const;
  int generators() const;
  /// Special points at vertex v: labels ascending, then neighbors ascending.
  std::vector<SpecialRef> specials(int v) const;
  const ProjectivePoint& special_point(int v, const SpecialRef& ref) const;
  ProjectivePoint& special_point(int v, const SpecialRef& ref);
};

/// One SpGL(2|1) element per vertex, acting diagonally on the curve.
struct Reparam {
  std::vector<SpGL21> per_vertex;
};

Reparam identity_reparam(const LabeledTree& t, int s);

/// Pointwise action g_alpha on every special point attached to alpha.
NodalCurve reparametrize(const NodalCurve& c, const Reparam& g);

struct NormalizeResult {
  NodalCurve curve;
  GrassmannNumber epsilon;
  int branch = +1;
  SpGL21 applied;  // the map applied at the vertex
};

/// Moves the three chosen special points at `vertex` to 0, 1_eps, inf by
/// the inverse of the three-point map; `choice` indexes into specials().
NormalizeResult normalize_vertex(const NodalCurve& c, int vertex,
                                 const std::array<int, 3>& choice = {0, 1, 2}, int branch = +1);

struct EquivalenceWitness {
  TreeHom hom;       // vertex correspondence c1 -> c2
  Reparam reparam;   // per c1-vertex maps
  std::vector<bool> xi_flip;  // which vertices matched through Xi_-
};

/// Decides equivalence of two stable curves under reparametrization and
/// label-preserving tree isomorphism; returns a verifying witness.
std::optional<EquivalenceWitness> equivalent(const NodalCurve& c1, const NodalCurve& c2,
                                             double tol = 1e-8);

// Dimension formulas. All components are exact integers.
SDim dim_M0k(int k);
SDim dim_M0T(int k, int num_edges);
SDim dim_quotient(SDim dim_m, SDim dim_g);
SDim dim_groupoid(SDim dim_g0, SDim dim_g1);
SDim dim_superJ(int n, int c1_pairing);
SDim dim_stable_maps(int n, int c1_pairing, int k, int num_edges);

/// Super stable map data: degrees stand in for the homology classes
/// (only the pairings with c_1 and omega matter at this level), and
/// node_values hold the evaluated germ of the map at each nodal point.
struct StableMapSkeleton {
  NodalCurve curve;
  std::map<int, int> degrees;  // vertex -> d_alpha >= 0, 0 means constant
  std::map<std::pair<int, int>, std::vector<GrassmannNumber>> node_values;
};

struct MapCheckReport {
  bool pass = true;
  std::vector<std::string> stability_violations;  // vertex names
  std::vector<std::string> node_violations;       // directed edge names
  std::vector<std::string> structural_errors;
};

MapCheckReport check_stable_map(const StableMapSkeleton& skel, double tol = 1e-9);

/// Evaluation of a map germ at a C-point of P^{1|1} in component fields:
///   y^a = phi^a + <s, psi^a> + <s, psi^b><s, psi^c> Gamma^a_{bc},
/// where <s, psi^a> = sum_mu s_mu psi[mu][a] pairs the odd spinor
/// coefficients s_mu of the point with the odd psi coefficients.
std::vector<GrassmannNumber> eval_component_fields(
    const std::vector<Coeff>& phi, const std::vector<GrassmannNumber>& s_coeffs,
    const std::vector<std::vector<GrassmannNumber>>& psi,
    const std::vector<std::vector<std::vector<Coeff>>>& christoffel);

/// All degree assignments with sum d where vertices of degree zero carry
/// at least three special points.
std::vector<std::map<int, int>> admissible_partitions(const LabeledTree& t, int total_degree);

struct GromovSequenceElement {
  NodalCurve curve;
  TreeHom hom;      // from the limit tree into this element's tree
  Reparam reparam;  // indexed by limit-tree vertices
};

struct GromovOptions {
  double tolerance = 1e-6;
  int tail = 5;             // how many trailing elements must be inside tolerance
  double grid_radius = 2.0; // chart grid for uniform-on-compacts sampling
  int grid_n = 9;
  double exclusion_radius = 0.25;  // puncture around the opposite node
};

struct ClauseReport {
  std::string clause;  // "rescaling" | "nodal" | "marked"
  bool pass = true;
  std::vector<double> residuals;  // one per sequence element
  double max_tail_residual = 0.0;
};

struct GromovReport {
  bool pass = false;
  std::vector<std::string> structural_errors;
  std::vector<ClauseReport> clauses;
  const ClauseReport& clause(const std::string& name) const;
};

/// Verifies declared Gromov convergence data for stable curves: the
/// (Rescaling), (Nodal points) and (Marked points) clauses, evaluated
/// coefficientwise with the declared tail inside the tolerance. The
/// rescaling maps are sampled on a chart grid punctured around the
/// opposite nodal point.
GromovReport check_gromov_curves(const std::vector<GromovSequenceElement>& seq,
                                 const NodalCurve& limit, const GromovOptions& opts = {});

}  // namespace supermoduli
