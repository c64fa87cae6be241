#include "supermoduli/modulispaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace supermoduli {

NodalCurve::NodalCurve(LabeledTree t, std::map<std::pair<int, int>, ProjectivePoint> n,
                       std::map<int, ProjectivePoint> m, double min_separation)
    : tree(std::move(t)), nodes(std::move(n)), marks(std::move(m)) {
  validate(min_separation);
}

void NodalCurve::validate(double min_separation) const {
  tree.validate();
  for (auto [u, v] : tree.edges) {
    if (!nodes.count({u, v}) || !nodes.count({v, u}))
      throw std::invalid_argument("NodalCurve: missing nodal point for an edge");
  }
  if (static_cast<int>(nodes.size()) != 2 * static_cast<int>(tree.edges.size()))
    throw std::invalid_argument("NodalCurve: nodal points do not match the edge set");
  for (auto [i, v] : tree.labels) {
    (void)v;
    if (!marks.count(i)) throw std::invalid_argument("NodalCurve: missing marked point");
  }
  if (marks.size() != tree.labels.size())
    throw std::invalid_argument("NodalCurve: marked points do not match the labels");
  for (int v = 0; v < tree.num_vertices; ++v) {
    auto sp = specials(v);
    for (size_t i = 0; i < sp.size(); ++i)
      for (size_t j = i + 1; j < sp.size(); ++j) {
        if (reduced_chordal_distance(special_point(v, sp[i]), special_point(v, sp[j])) <
            min_separation)
          throw std::invalid_argument(
              "NodalCurve: special points at vertex " + std::to_string(v) +
              " have coinciding reductions");
      }
  }
}

int NodalCurve::generators() const {
  if (!marks.empty()) return marks.begin()->second.generators();
  if (!nodes.empty()) return nodes.begin()->second.generators();
  return 0;
}

std::vector<SpecialRef> NodalCurve::specials(int v) const {
  std::vector<SpecialRef> out;
  for (auto [i, w] : tree.labels)
    if (w == v) out.push_back({true, i});
  for (int w : tree.neighbors(v)) out.push_back({false, w});
  std::sort(out.begin(), out.end(), [](const SpecialRef& a, const SpecialRef& b) {
    if (a.is_label != b.is_label) return a.is_label;
    return a.id < b.id;
  });
  return out;
}

const ProjectivePoint& NodalCurve::special_point(int v, const SpecialRef& ref) const {
  return ref.is_label ? marks.at(ref.id) : nodes.at({v, ref.id});
}

ProjectivePoint& NodalCurve::special_point(int v, const SpecialRef& ref) {
  return ref.is_label ? marks.at(ref.id) : nodes.at({v, ref.id});
}

Reparam identity_reparam(const LabeledTree& t, int s) {
  Reparam g;
  g.per_vertex.assign(t.num_vertices, identity_spgl21(s));
  return g;
}

NodalCurve reparametrize(const NodalCurve& c, const Reparam& g) {
  if (static_cast<int>(g.per_vertex.size()) != c.tree.num_vertices)
    throw std::invalid_argument("reparametrize: tree mismatch");
  NodalCurve r = c;
  for (auto& [edge, p] : r.nodes) p = act(g.per_vertex[edge.first], p);
  for (auto& [i, p] : r.marks) p = act(g.per_vertex[c.tree.labels.at(i)], p);
  r.validate();
  return r;
}

NormalizeResult normalize_vertex(const NodalCurve& c, int vertex, const std::array<int, 3>& choice,
                                 int branch) {
  auto sp = c.specials(vertex);
  if (sp.size() < 3)
    throw std::invalid_argument("normalize_vertex: vertex has fewer than three special points");
  for (int idx : choice)
    if (idx < 0 || idx >= static_cast<int>(sp.size()))
      throw std::invalid_argument("normalize_vertex: choice index out of range");
  ThreePointSolution sol =
      solve_three_points(c.special_point(vertex, sp[choice[0]]),
                         c.special_point(vertex, sp[choice[1]]),
                         c.special_point(vertex, sp[choice[2]]), branch);
  NormalizeResult res;
  res.applied = inverse(sol.map);
  res.epsilon = sol.epsilon;
  res.branch = branch;
  res.curve = c;
  for (const auto& ref : sp) {
    ProjectivePoint& p = res.curve.special_point(vertex, ref);
    p = act(res.applied, p);
  }
  return res;
}

namespace {

void find_all_label_isomorphisms(const LabeledTree& a, const LabeledTree& b,
                                 std::vector<TreeHom>& out) {
  if (a.num_vertices != b.num_vertices || a.num_labels() != b.num_labels()) return;
  const int n = a.num_vertices;
  std::vector<int> map(n, -1), used(n, 0);
  std::function<void(int)> extend = [&](int v) {
    if (v == n) {
      TreeHom f{map};
      bool strict = false;
      if (hom_is_valid(a, b, f, &strict) && strict) out.push_back(f);
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used[w]) continue;
      if (a.degree(v) != b.degree(w) || a.labels_at(v) != b.labels_at(w)) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u)
        if (a.has_edge(u, v) != b.has_edge(map[u], w)) ok = false;
      if (!ok) continue;
      map[v] = w;
      used[w] = 1;
      extend(v + 1);
      used[w] = 0;
      map[v] = -1;
    }
  };
  extend(0);
}

SpecialRef map_ref(const SpecialRef& ref, const TreeHom& sigma) {
  if (ref.is_label) return ref;
  return {false, sigma(ref.id)};
}

ProjectivePoint xi_reflect(const ProjectivePoint& p) {
  return {p.Z1, p.Z2, -p.Theta};
}

}  // namespace

std::optional<EquivalenceWitness> equivalent(const NodalCurve& c1, const NodalCurve& c2,
                                             double tol) {
  if (!is_stable(c1.tree) || !is_stable(c2.tree))
    throw std::invalid_argument("equivalent: both curves must be stable");
  std::vector<TreeHom> isos;
  find_all_label_isomorphisms(c1.tree, c2.tree, isos);
  const int s = c1.generators();
  const int nv = c1.tree.num_vertices;

  for (const TreeHom& sigma : isos) {
    Reparam witness;
    witness.per_vertex.assign(nv, identity_spgl21(s));
    std::vector<bool> flips(nv, false);
    bool all_match = true;

    for (int v = 0; v < nv && all_match; ++v) {
      auto sp1 = c1.specials(v);
      // the corresponding triple on the other side, transported by sigma
      ThreePointSolution sol1 = solve_three_points(c1.special_point(v, sp1[0]),
                                                   c1.special_point(v, sp1[1]),
                                                   c1.special_point(v, sp1[2]), +1);
      ThreePointSolution sol2 =
          solve_three_points(c2.special_point(sigma(v), map_ref(sp1[0], sigma)),
                             c2.special_point(sigma(v), map_ref(sp1[1], sigma)),
                             c2.special_point(sigma(v), map_ref(sp1[2], sigma)), +1);
      SpGL21 n1 = inverse(sol1.map);

      // remaining special points after normalization, in c1 order
      bool direct = distance(sol1.epsilon, sol2.epsilon) <= tol;
      bool flipped = distance(sol1.epsilon, -sol2.epsilon) <= tol;
      for (size_t i = 3; i < sp1.size() && (direct || flipped); ++i) {
        ProjectivePoint a = act(n1, c1.special_point(v, sp1[i]));
        ProjectivePoint b =
            act(inverse(sol2.map), c2.special_point(sigma(v), map_ref(sp1[i], sigma)));
        if (direct && projective_distance(a, b) > tol) direct = false;
        if (flipped && projective_distance(xi_reflect(a), b) > tol) flipped = false;
      }
      if (!direct && !flipped) {
        all_match = false;
        break;
      }
      bool use_flip = !direct;
      flips[v] = use_flip;
      SpGL21 g = use_flip ? compose(compose(n1, xi_minus(s)), sol2.map) : compose(n1, sol2.map);
      witness.per_vertex[v] = g;
    }
    if (!all_match) continue;

    // verify the witness end to end
    bool verified = true;
    for (auto [i, p] : c1.marks) {
      ProjectivePoint moved = act(witness.per_vertex[c1.tree.labels.at(i)], p);
      if (projective_distance(moved, c2.marks.at(i)) > tol) verified = false;
    }
    for (auto [edge, p] : c1.nodes) {
      ProjectivePoint moved = act(witness.per_vertex[edge.first], p);
      if (projective_distance(moved, c2.nodes.at({sigma(edge.first), sigma(edge.second)})) > tol)
        verified = false;
    }
    if (verified) {
      EquivalenceWitness w;
      w.hom = sigma;
      w.reparam = witness;
      w.xi_flip = flips;
      return w;
    }
  }
  return std::nullopt;
}

SDim dim_M0k(int k) {
  if (k < 3) throw std::invalid_argument("dim_M0k requires k >= 3");
  return {2 * k - 6, 2 * k - 4};
}

SDim dim_M0T(int k, int num_edges) {
  if (k < 3 || num_edges < 0) throw std::invalid_argument("dim_M0T: invalid arguments");
  return {2 * k - 6 - 2 * num_edges, 2 * k - 4};
}

SDim dim_quotient(SDim dim_m, SDim dim_g) { return dim_m - dim_g; }

SDim dim_groupoid(SDim dim_g0, SDim dim_g1) { return 2 * dim_g0 - dim_g1; }

SDim dim_superJ(int n, int c1_pairing) { return {2 * n + 2 * c1_pairing, 2 * c1_pairing}; }

SDim dim_stable_maps(int n, int c1_pairing, int k, int num_edges) {
  return {2 * n + 2 * c1_pairing - 2 * num_edges + 2 * k - 6, 2 * c1_pairing + 2 * k - 4};
}

MapCheckReport check_stable_map(const StableMapSkeleton& skel, double tol) {
  MapCheckReport report;
  for (auto [u, v] : skel.curve.tree.edges) {
    if (!skel.node_values.count({u, v}) || !skel.node_values.count({v, u})) {
      report.structural_errors.push_back("missing node value on edge " + std::to_string(u) + "-" +
                                         std::to_string(v));
      report.pass = false;
    }
  }
  for (int v = 0; v < skel.curve.tree.num_vertices; ++v) {
    if (!skel.degrees.count(v)) {
      report.structural_errors.push_back("missing degree at vertex " + std::to_string(v));
      report.pass = false;
    }
  }
  if (!report.pass) return report;

  for (int v = 0; v < skel.curve.tree.num_vertices; ++v) {
    if (skel.degrees.at(v) < 0) {
      report.structural_errors.push_back("negative degree at vertex " + std::to_string(v));
      report.pass = false;
    }
    if (skel.degrees.at(v) == 0 && skel.curve.tree.special_count(v) < 3) {
      report.stability_violations.push_back(std::to_string(v));
      report.pass = false;
    }
  }
  for (auto [u, v] : skel.curve.tree.edges) {
    const auto& a = skel.node_values.at({u, v});
    const auto& b = skel.node_values.at({v, u});
    if (a.size() != b.size()) {
      report.structural_errors.push_back("node value dimension mismatch on edge " +
                                         std::to_string(u) + "-" + std::to_string(v));
      report.pass = false;
      continue;
    }
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, distance(a[i], b[i]));
    if (worst > tol) {
      report.node_violations.push_back(std::to_string(u) + "-" + std::to_string(v));
      report.pass = false;
    }
  }
  return report;
}

std::vector<GrassmannNumber> eval_component_fields(
    const std::vector<Coeff>& phi, const std::vector<GrassmannNumber>& s_coeffs,
    const std::vector<std::vector<GrassmannNumber>>& psi,
    const std::vector<std::vector<std::vector<Coeff>>>& christoffel) {
  const size_t n = phi.size();
  if (psi.size() != s_coeffs.size())
    throw std::invalid_argument("eval_component_fields: psi rows must match spinor coefficients");
  for (const auto& row : psi)
    if (row.size() != n)
      throw std::invalid_argument("eval_component_fields: psi columns must match phi");
  for (const auto& g : s_coeffs)
    if (!g.is_zero() && g.parity() != Parity::Odd)
      throw std::invalid_argument("eval_component_fields: spinor coefficients must be odd");
  int s = s_coeffs.empty() ? 0 : s_coeffs[0].generators();
  for (const auto& row : psi)
    for (const auto& g : row)
      if (!g.is_zero() && g.parity() != Parity::Odd)
        throw std::invalid_argument("eval_component_fields: psi entries must be odd");

  // pairings <s, psi^a>, even and nilpotent
  std::vector<GrassmannNumber> pair(n, GrassmannNumber(s));
  for (size_t a = 0; a < n; ++a)
    for (size_t mu = 0; mu < s_coeffs.size(); ++mu) pair[a] += s_coeffs[mu] * psi[mu][a];

  std::vector<GrassmannNumber> out(n, GrassmannNumber(s));
  for (size_t a = 0; a < n; ++a) {
    out[a] = GrassmannNumber(s, phi[a]) + pair[a];
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c) {
        Coeff g = christoffel[a][b][c];
        if (g == Coeff{0.0}) continue;
        out[a] += pair[b] * pair[c] * g;
      }
  }
  return out;
}

std::vector<std::map<int, int>> admissible_partitions(const LabeledTree& t, int total_degree) {
  if (total_degree < 0) throw std::invalid_argument("admissible_partitions: degree must be >= 0");
  std::vector<std::map<int, int>> out;
  std::map<int, int> current;
  std::function<void(int, int)> assign = [&](int v, int remaining) {
    if (v == t.num_vertices) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    for (int d = 0; d <= remaining; ++d) {
      if (d == 0 && t.special_count(v) < 3) continue;
      current[v] = d;
      assign(v + 1, remaining - d);
    }
    current.erase(v);
  };
  assign(0, total_degree);
  return out;
}

const ClauseReport& GromovReport::clause(const std::string& name) const {
  for (const auto& c : clauses)
    if (c.clause == name) return c;
  throw std::out_of_range("no such clause: " + name);
}

namespace {

double chordal_to_body(const ProjectivePoint& p, Coeff z1, Coeff z2) {
  Coeff p1 = p.Z1.body(), p2 = p.Z2.body();
  double num = std::abs(p1 * z2 - z1 * p2);
  double den = std::sqrt((std::norm(p1) + std::norm(p2)) * (std::norm(z1) + std::norm(z2)));
  return num / den;
}

}  // namespace

GromovReport check_gromov_curves(const std::vector<GromovSequenceElement>& seq,
                                 const NodalCurve& limit, const GromovOptions& opts) {
  GromovReport report;
  const int s = limit.generators();
  const int nv = limit.tree.num_vertices;

  for (size_t k = 0; k < seq.size(); ++k) {
    const auto& el = seq[k];
    if (!hom_is_valid(limit.tree, el.curve.tree, el.hom))
      report.structural_errors.push_back("element " + std::to_string(k) +
                                         ": tree homomorphism is not label-compatible");
    if (static_cast<int>(el.reparam.per_vertex.size()) != nv)
      report.structural_errors.push_back("element " + std::to_string(k) +
                                         ": reparametrization does not fit the limit tree");
  }
  if (!report.structural_errors.empty()) {
    report.pass = false;
    return report;
  }

  ClauseReport rescaling{"rescaling", true, {}, 0.0};
  ClauseReport nodal{"nodal", true, {}, 0.0};
  ClauseReport marked{"marked", true, {}, 0.0};

  // chart grid with odd part fixed to the first generator
  std::vector<std::pair<Coeff, GrassmannNumber>> grid;
  {
    GrassmannNumber theta =
        (s >= 1) ? GrassmannNumber::generator(s, 1) : GrassmannNumber(s);
    int n = std::max(2, opts.grid_n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double x = -opts.grid_radius + 2.0 * opts.grid_radius * i / (n - 1);
        double y = -opts.grid_radius + 2.0 * opts.grid_radius * j / (n - 1);
        if (x * x + y * y > opts.grid_radius * opts.grid_radius + 1e-12) continue;
        grid.push_back({Coeff{x, y}, theta});
      }
  }

  for (size_t k = 0; k < seq.size(); ++k) {
    const auto& el = seq[k];
    double r_res = 0.0, n_res = 0.0, m_res = 0.0;

    for (auto [i, v] : limit.tree.labels) {
      SpGL21 ginv = inverse(el.reparam.per_vertex[v]);
      ProjectivePoint pulled = act(ginv, el.curve.marks.at(i));
      m_res = std::max(m_res, projective_distance(pulled, limit.marks.at(i)));
    }

    for (const auto& [edge, target] : limit.nodes) {
      auto [a, b] = edge;
      int fa = el.hom(a), fb = el.hom(b);
      if (fa != fb) {
        // (Nodal points): pull the image node back by g_a
        SpGL21 ginv = inverse(el.reparam.per_vertex[a]);
        ProjectivePoint pulled = act(ginv, el.curve.nodes.at({fa, fb}));
        n_res = std::max(n_res, projective_distance(pulled, target));
      } else {
        // (Rescaling): g_a^{-1} g_b sampled away from the opposite node
        SpGL21 map = compose(el.reparam.per_vertex[b], inverse(el.reparam.per_vertex[a]));
        const ProjectivePoint& opposite = limit.nodes.at({b, a});
        for (const auto& [z, theta] : grid) {
          if (chordal_to_body(opposite, z, Coeff{1.0}) < opts.exclusion_radius) continue;
          ProjectivePoint image = act(map, ProjectivePoint::affine(GrassmannNumber(s, z), theta));
          r_res = std::max(r_res, projective_distance(image, target));
        }
      }
    }

    rescaling.residuals.push_back(r_res);
    nodal.residuals.push_back(n_res);
    marked.residuals.push_back(m_res);
  }

  auto finish = [&](ClauseReport& c) {
    int n = static_cast<int>(c.residuals.size());
    int from = std::max(0, n - opts.tail);
    for (int i = from; i < n; ++i) c.max_tail_residual = std::max(c.max_tail_residual, c.residuals[i]);
    c.pass = c.max_tail_residual <= opts.tolerance;
  };
  finish(rescaling);
  finish(nodal);
  finish(marked);
  report.clauses = {rescaling, nodal, marked};
  report.pass = rescaling.pass && nodal.pass && marked.pass;
  return report;
}

}  // namespace supermoduli
