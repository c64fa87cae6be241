#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace supermoduli {

/// A k-labeled tree: vertices 0..n-1, undirected edges, and a labeling
/// map {1..k} -> vertices. Connectivity and |E| = n-1 are checked by
/// validate().
struct LabeledTree {
  int num_vertices = 1;
  std::set<std::pair<int, int>> edges;  // stored with first < second
  std::map<int, int> labels;            // label index (1-based) -> vertex

  LabeledTree() = default;
  LabeledTree(int n, std::set<std::pair<int, int>> e, std::map<int, int> l);

  void validate() const;
  int num_labels() const { return static_cast<int>(labels.size()); }
  std::vector<std::vector<int>> adjacency() const;
  int degree(int v) const;
  int labels_at(int v) const;
  /// labels + incident edges
  int special_count(int v) const { return labels_at(v) + degree(v); }
  std::vector<int> neighbors(int v) const;
  bool has_edge(int u, int v) const;
};

/// Vertex map between two labeled trees. Valid when labels are preserved
/// and every edge maps to an edge or collapses to a vertex; `strict`
/// reports whether no edge collapses.
struct TreeHom {
  std::vector<int> vertex_map;  // indexed by source vertex

  int operator()(int v) const { return vertex_map[v]; }
};

bool hom_is_valid(const LabeledTree& src, const LabeledTree& dst, const TreeHom& f,
                  bool* strict = nullptr);

/// Every vertex carries at least three special points.
bool is_stable(const LabeledTree& t);

/// A string equal for two trees iff they are isomorphic as k-labeled
/// trees: label-decorated AHU encoding rooted at the centroid, ties
/// broken lexicographically.
std::string canonical_form(const LabeledTree& t);

/// An explicit label-preserving isomorphism, when one exists.
std::optional<TreeHom> find_label_isomorphism(const LabeledTree& a, const LabeledTree& b);

/// Copy of the tree with vertices renamed by `perm` (new index of old i).
LabeledTree permute_vertices(const LabeledTree& t, const std::vector<int>& perm);

/// All stable k-labeled trees up to isomorphism with at most max_vertices
/// vertices (capped at the structural bound k-2); duplicate-free under
/// canonical_form, sorted deterministically. Desk scale, k <= 7.
std::vector<LabeledTree> enumerate_stable(int k, int max_vertices = -1);

/// Collapses vertices with fewer than three special points into a
/// neighbor, iterating to a fixpoint. A vertex with extra_special >= 1
/// carries a non-constant map and is never collapsed. Labels are
/// preserved. Throws std::domain_error when no stable collapse exists.
LabeledTree stabilize(const LabeledTree& t, const std::map<int, int>& extra_special = {});

}  // namespace supermoduli
