#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <map>
#include <vector>

#include "curves_util.hpp"
#include "supermoduli/modulispaces.hpp"

using namespace supermoduli;
using testutil::make_bubbling_sequence;
using testutil::random_grassmann;
using testutil::random_reparam;
using testutil::random_spgl21;
using testutil::random_stable_curve;

namespace {

const int S = 4;

LabeledTree two_vertex_tree() {
  return LabeledTree(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
}

// Minimal independent Grassmann expansion for the component-field oracle:
// terms are kept as sorted index lists with insertion-sort sign counting.
using MiniTerm = std::vector<int>;
using Mini = std::map<MiniTerm, std::complex<double>>;

Mini mini_from(const GrassmannNumber& g) {
  Mini out;
  for (const auto& [subset, c] : g.terms()) out[testutil::subset_indices(subset)] = c;
  return out;
}

Mini mini_mul(const Mini& a, const Mini& b) {
  Mini out;
  for (const auto& [ta, ca] : a)
    for (const auto& [tb, cb] : b) {
      std::vector<int> merged = ta;
      int sign = 1;
      bool dead = false;
      for (int idx : tb) {
        // insert idx into merged, counting crossings
        int pos = 0;
        while (pos < static_cast<int>(merged.size()) && merged[pos] < idx) ++pos;
        if (pos < static_cast<int>(merged.size()) && merged[pos] == idx) {
          dead = true;
          break;
        }
        if ((static_cast<int>(merged.size()) - pos) % 2 != 0) sign = -sign;
        merged.insert(merged.begin() + pos, idx);
      }
      if (dead) continue;
      out[merged] += static_cast<double>(sign) * ca * cb;
    }
  return out;
}

void mini_add(Mini& a, const Mini& b, std::complex<double> factor = 1.0) {
  for (const auto& [t, c] : b) a[t] += factor * c;
}

double mini_distance(const Mini& a, const GrassmannNumber& g) {
  Mini b = mini_from(g);
  double worst = 0.0;
  for (const auto& [t, c] : a) {
    auto it = b.find(t);
    std::complex<double> other = (it == b.end()) ? 0.0 : it->second;
    worst = std::max(worst, std::abs(c - other));
  }
  for (const auto& [t, c] : b) {
    if (!a.count(t)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

}  // namespace

TEST_CASE("NodalCurve validation and specials ordering") {
  std::mt19937_64 rng(89);
  NodalCurve c = random_stable_curve(rng, two_vertex_tree(), S);
  auto sp = c.specials(0);
  REQUIRE(sp.size() == 3);
  CHECK(sp[0].is_label);
  CHECK(sp[0].id == 1);
  CHECK(sp[1].is_label);
  CHECK(sp[1].id == 2);
  CHECK_FALSE(sp[2].is_label);
  CHECK(sp[2].id == 1);

  SUBCASE("coinciding reductions are rejected") {
    NodalCurve bad = c;
    bad.marks.at(2) = bad.marks.at(1);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
  SUBCASE("missing nodal point is rejected") {
    auto nodes = c.nodes;
    nodes.erase({0, 1});
    CHECK_THROWS_AS(NodalCurve(c.tree, nodes, c.marks), std::invalid_argument);
  }
}

TEST_CASE("reparametrize") {
  std::mt19937_64 rng(97);
  NodalCurve c = random_stable_curve(rng, two_vertex_tree(), S);
  SUBCASE("identity leaves the curve unchanged") {
    NodalCurve r = reparametrize(c, identity_reparam(c.tree, S));
    for (auto [i, p] : c.marks) CHECK(projective_distance(r.marks.at(i), p) == 0.0);
  }
  SUBCASE("per-vertex reflection negates all odd components") {
    Reparam xi;
    xi.per_vertex = {xi_minus(S), xi_minus(S)};
    NodalCurve r = reparametrize(c, xi);
    for (auto [i, p] : c.marks) {
      ProjectivePoint expect{p.Z1 * Coeff{-1.0}, p.Z2 * Coeff{-1.0}, p.Theta};
      CHECK(projective_distance(r.marks.at(i), expect) < 1e-12);
      auto [z0, t0] = p.chart1();
      auto [z1, t1] = r.marks.at(i).chart1();
      CHECK(distance(z1, z0) < 1e-12);
      CHECK(distance(t1, -t0) < 1e-12);
    }
  }
  SUBCASE("g then g inverse returns the original curve") {
    Reparam g = random_reparam(rng, c.tree, S);
    Reparam ginv;
    for (const auto& l : g.per_vertex) ginv.per_vertex.push_back(inverse(l));
    NodalCurve r = reparametrize(reparametrize(c, g), ginv);
    for (auto [i, p] : c.marks) CHECK(projective_distance(r.marks.at(i), p) < 1e-9);
    for (auto [e, p] : c.nodes) CHECK(projective_distance(r.nodes.at(e), p) < 1e-9);
  }
  SUBCASE("left action law") {
    Reparam g = random_reparam(rng, c.tree, S);
    Reparam h = random_reparam(rng, c.tree, S);
    Reparam hg;
    for (size_t v = 0; v < g.per_vertex.size(); ++v)
      hg.per_vertex.push_back(compose(g.per_vertex[v], h.per_vertex[v]));
    NodalCurve lhs = reparametrize(reparametrize(c, g), h);
    NodalCurve rhs = reparametrize(c, hg);
    for (auto [i, p] : lhs.marks) CHECK(projective_distance(p, rhs.marks.at(i)) < 1e-9);
  }
}

TEST_CASE("normalize_vertex") {
  std::mt19937_64 rng(101);
  SUBCASE("already-normalized vertex is fixed") {
    // single vertex with marks at 0, 1_eps, infinity
    LabeledTree t(1, {}, {{1, 0}, {2, 0}, {3, 0}});
    GrassmannNumber eps = random_grassmann(rng, S, Parity::Odd, 0.5);
    std::map<int, ProjectivePoint> marks;
    marks.emplace(1, ProjectivePoint::zero(S));
    marks.emplace(2, ProjectivePoint::one_eps(eps));
    marks.emplace(3, ProjectivePoint::infinity(S));
    NodalCurve c(t, {}, marks);
    NormalizeResult res = normalize_vertex(c, 0);
    CHECK(distance(res.epsilon, eps) < 1e-10);
    CHECK(distance(res.applied.mat, SuperMatrix::identity(SDim{2, 1}, S)) < 1e-9);
    CHECK(projective_distance(res.curve.marks.at(1), ProjectivePoint::zero(S)) < 1e-9);
  }
  SUBCASE("k=3: the modulus is epsilon alone") {
    LabeledTree t(1, {}, {{1, 0}, {2, 0}, {3, 0}});
    std::map<int, ProjectivePoint> marks;
    std::mt19937_64 r2(103);
    marks.emplace(1, testutil::random_point(r2, S));
    marks.emplace(2, testutil::random_point(r2, S));
    marks.emplace(3, testutil::random_point(r2, S));
    NodalCurve c(t, {}, marks);
    NormalizeResult res = normalize_vertex(c, 0);
    CHECK(projective_distance(res.curve.marks.at(1), ProjectivePoint::zero(S)) < 1e-8);
    CHECK(projective_distance(res.curve.marks.at(2), ProjectivePoint::one_eps(res.epsilon)) < 1e-8);
    CHECK(projective_distance(res.curve.marks.at(3), ProjectivePoint::infinity(S)) < 1e-8);
  }
  SUBCASE("round trip through the recorded map") {
    NodalCurve c = random_stable_curve(rng, two_vertex_tree(), S);
    NormalizeResult res = normalize_vertex(c, 1);
    SpGL21 back = inverse(res.applied);
    for (auto ref : c.specials(1)) {
      ProjectivePoint p = act(back, res.curve.special_point(1, ref));
      CHECK(projective_distance(p, c.special_point(1, ref)) < 1e-8);
    }
    // vertex 0 untouched
    CHECK(projective_distance(res.curve.marks.at(1), c.marks.at(1)) == 0.0);
  }
}

TEST_CASE("equivalent") {
  std::mt19937_64 rng(107);
  SUBCASE("construct-and-recover with vertex relabeling") {
    for (int rep = 0; rep < 10; ++rep) {
      auto trees = enumerate_stable(5);
      const LabeledTree& t = trees[rng() % trees.size()];
      NodalCurve c1 = random_stable_curve(rng, t, S);
      Reparam g = random_reparam(rng, t, S);
      NodalCurve moved = reparametrize(c1, g);
      // also scramble the vertex names
      std::vector<int> perm(t.num_vertices);
      for (int i = 0; i < t.num_vertices; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      LabeledTree t2 = permute_vertices(t, perm);
      std::map<std::pair<int, int>, ProjectivePoint> nodes;
      for (auto [e, p] : moved.nodes) nodes.emplace(std::make_pair(perm[e.first], perm[e.second]), p);
      NodalCurve c2(t2, nodes, moved.marks);

      auto witness = equivalent(c1, c2);
      REQUIRE(witness.has_value());
      // verify the witness explicitly
      for (auto [i, p] : c1.marks) {
        ProjectivePoint q = act(witness->reparam.per_vertex[c1.tree.labels.at(i)], p);
        CHECK(projective_distance(q, c2.marks.at(i)) < 1e-8);
      }
      for (auto [e, p] : c1.nodes) {
        ProjectivePoint q = act(witness->reparam.per_vertex[e.first], p);
        CHECK(projective_distance(q, c2.nodes.at({witness->hom(e.first), witness->hom(e.second)})) <
              1e-8);
      }
    }
  }
  SUBCASE("a moved marked point body breaks equivalence") {
    NodalCurve c = random_stable_curve(rng, two_vertex_tree(), S);
    NodalCurve d = c;
    d.marks.at(4).Z1 += GrassmannNumber(S, 0.37);
    d.validate();
    CHECK_FALSE(equivalent(c, d).has_value());
  }
  SUBCASE("epsilon sign flip is absorbed by a reflection witness") {
    // flip the odd data at one vertex through Xi_-
    NodalCurve c = random_stable_curve(rng, two_vertex_tree(), S);
    Reparam g = identity_reparam(c.tree, S);
    g.per_vertex[1] = xi_minus(S);
    NodalCurve d = reparametrize(c, g);
    auto witness = equivalent(c, d);
    REQUIRE(witness.has_value());
    CHECK_FALSE(witness->xi_flip[0]);
    CHECK(witness->xi_flip[1]);
  }
  SUBCASE("reflexive and symmetric") {
    NodalCurve c = random_stable_curve(rng, two_vertex_tree(), S);
    CHECK(equivalent(c, c).has_value());
    Reparam g = random_reparam(rng, c.tree, S);
    NodalCurve d = reparametrize(c, g);
    CHECK(equivalent(c, d).has_value());
    CHECK(equivalent(d, c).has_value());
  }
}

TEST_CASE("dimension formulas") {
  CHECK(dim_M0k(3) == SDim{0, 2});
  CHECK(dim_M0k(4) == SDim{2, 4});
  CHECK(dim_M0k(5) == SDim{4, 6});
  CHECK(dim_M0T(4, 1) == SDim{0, 4});
  CHECK(dim_quotient(SDim{8, 8}, SDim{6, 4}) == SDim{2, 4});
  CHECK(dim_groupoid(SDim{3, 2}, SDim{4, 1}) == SDim{2, 3});
  CHECK(dim_superJ(1, 2) == SDim{6, 4});
  CHECK(dim_stable_maps(1, 2, 3, 0) == SDim{6, 6});
  CHECK_THROWS_AS(dim_M0k(2), std::invalid_argument);

  SUBCASE("tree dimension equals the per-vertex sum") {
    for (int k = 3; k <= 5; ++k) {
      for (const auto& t : enumerate_stable(k)) {
        int e = static_cast<int>(t.edges.size());
        SDim total{0, 0};
        for (int v = 0; v < t.num_vertices; ++v) {
          SDim part = dim_M0k(t.special_count(v));
          total = total + part;
        }
        SDim expect = dim_M0T(k, e);
        CHECK(total == expect);
        // intermediate bookkeeping line with #T = #E + 1
        CHECK(total.even == 4 * e + 2 * k - 6 * (e + 1));
        CHECK(total.odd == 4 * e + 2 * k - 4 * (e + 1));
      }
    }
  }
  SUBCASE("quotient bookkeeping of the marked-point moduli") {
    // dim Z_k - dim SpGL(2|1) = 2k|2k - 6|4
    int k = 5;
    CHECK(dim_quotient(SDim{2 * k, 2 * k}, SDim{6, 4}) == dim_M0k(k));
  }
}

TEST_CASE("check_stable_map") {
  std::mt19937_64 rng(109);
  NodalCurve c = random_stable_curve(rng, two_vertex_tree(), S);
  StableMapSkeleton skel;
  skel.curve = c;
  skel.degrees = {{0, 1}, {1, 2}};
  std::vector<GrassmannNumber> value = {GrassmannNumber(S, Coeff{0.5, 0.1}),
                                        GrassmannNumber(S, Coeff{-1.0, 0.0})};
  skel.node_values[{0, 1}] = value;
  skel.node_values[{1, 0}] = value;

  SUBCASE("well-formed data passes") {
    MapCheckReport r = check_stable_map(skel);
    CHECK(r.pass);
    CHECK(r.stability_violations.empty());
    CHECK(r.node_violations.empty());
  }
  SUBCASE("constant vertex with too few special points is named") {
    // vertex 1 of a 1-labeled two-vertex tree has 1 label + 1 edge = 2
    LabeledTree t(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}});
    NodalCurve c2 = random_stable_curve(rng, t, S);
    StableMapSkeleton s2;
    s2.curve = c2;
    s2.degrees = {{0, 0}, {1, 0}};
    s2.node_values[{0, 1}] = value;
    s2.node_values[{1, 0}] = value;
    MapCheckReport r = check_stable_map(s2);
    CHECK_FALSE(r.pass);
    REQUIRE(r.stability_violations.size() == 1);
    CHECK(r.stability_violations[0] == "1");
  }
  SUBCASE("mismatched node values are named") {
    skel.node_values[{1, 0}][0] += GrassmannNumber(S, 1e-3);
    MapCheckReport r = check_stable_map(skel);
    CHECK_FALSE(r.pass);
    REQUIRE(r.node_violations.size() == 1);
    CHECK(r.node_violations[0] == "0-1");
  }
}

TEST_CASE("eval_component_fields") {
  std::mt19937_64 rng(113);
  const size_t n = 2;
  SUBCASE("vanishing psi returns phi") {
    std::vector<Coeff> phi = {Coeff{1.0, 2.0}, Coeff{-0.5, 0.0}};
    std::vector<GrassmannNumber> sc = {GrassmannNumber(S), GrassmannNumber(S)};
    std::vector<std::vector<GrassmannNumber>> psi(2, std::vector<GrassmannNumber>(n, GrassmannNumber(S)));
    std::vector<std::vector<std::vector<Coeff>>> gamma(
        n, std::vector<std::vector<Coeff>>(n, std::vector<Coeff>(n, Coeff{0.3})));
    auto out = eval_component_fields(phi, sc, psi, gamma);
    for (size_t a = 0; a < n; ++a) CHECK(distance(out[a], GrassmannNumber(S, phi[a])) == 0.0);
  }
  SUBCASE("flat target keeps only the linear pairing") {
    std::vector<Coeff> phi = {Coeff{1.0}, Coeff{2.0}};
    std::vector<GrassmannNumber> sc = {GrassmannNumber::generator(S, 1),
                                       GrassmannNumber::generator(S, 2)};
    std::vector<std::vector<GrassmannNumber>> psi(2, std::vector<GrassmannNumber>(n));
    for (auto& row : psi)
      for (auto& g : row) g = random_grassmann(rng, S, Parity::Odd, 0.5);
    std::vector<std::vector<std::vector<Coeff>>> gamma(
        n, std::vector<std::vector<Coeff>>(n, std::vector<Coeff>(n, Coeff{0.0})));
    auto out = eval_component_fields(phi, sc, psi, gamma);
    for (size_t a = 0; a < n; ++a) {
      GrassmannNumber expect = GrassmannNumber(S, phi[a]) + sc[0] * psi[0][a] + sc[1] * psi[1][a];
      CHECK(distance(out[a], expect) < 1e-14);
    }
  }
  SUBCASE("nonzero Christoffels against the independent expansion") {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<Coeff> phi = {testutil::random_coeff(rng), testutil::random_coeff(rng)};
      std::vector<GrassmannNumber> sc = {random_grassmann(rng, S, Parity::Odd, 0.8),
                                         random_grassmann(rng, S, Parity::Odd, 0.8)};
      std::vector<std::vector<GrassmannNumber>> psi(2, std::vector<GrassmannNumber>(n));
      for (auto& row : psi)
        for (auto& g : row) g = random_grassmann(rng, S, Parity::Odd, 0.8);
      // symmetric Christoffel table
      std::vector<std::vector<std::vector<Coeff>>> gamma(
          n, std::vector<std::vector<Coeff>>(n, std::vector<Coeff>(n)));
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
          for (size_t c = b; c < n; ++c) {
            Coeff v = testutil::random_coeff(rng);
            gamma[a][b][c] = v;
            gamma[a][c][b] = v;
          }
      auto out = eval_component_fields(phi, sc, psi, gamma);

      // independent expansion with the list-based arithmetic
      for (size_t a = 0; a < n; ++a) {
        Mini total;
        total[{}] += phi[a];
        std::vector<Mini> pair(n);
        for (size_t b = 0; b < n; ++b) {
          pair[b] = Mini{};
          for (size_t mu = 0; mu < 2; ++mu)
            mini_add(pair[b], mini_mul(mini_from(sc[mu]), mini_from(psi[mu][b])));
        }
        mini_add(total, pair[a]);
        for (size_t b = 0; b < n; ++b)
          for (size_t c = 0; c < n; ++c)
            mini_add(total, mini_mul(pair[b], pair[c]), gamma[a][b][c]);
        CHECK(mini_distance(total, out[a]) < 1e-10);
      }

      // the quadratic term is genuinely present
      GrassmannNumber quad = out[0] - GrassmannNumber(S, phi[0]);
      for (size_t mu = 0; mu < 2; ++mu) quad -= sc[mu] * psi[mu][0];
      if (rep == 0) CHECK(quad.max_abs() > 1e-6);
    }
  }
  SUBCASE("parity violations rejected") {
    std::vector<Coeff> phi = {Coeff{1.0}};
    std::vector<GrassmannNumber> sc = {GrassmannNumber(S, 1.0)};  // even, invalid
    std::vector<std::vector<GrassmannNumber>> psi = {{GrassmannNumber::generator(S, 1)}};
    std::vector<std::vector<std::vector<Coeff>>> gamma(1, {{{Coeff{0.0}}}});
    CHECK_THROWS_AS(eval_component_fields(phi, sc, psi, gamma), std::invalid_argument);
  }
}

TEST_CASE("admissible_partitions") {
  SUBCASE("single stable vertex takes the whole degree") {
    LabeledTree t(1, {}, {{1, 0}, {2, 0}, {3, 0}});
    auto parts = admissible_partitions(t, 2);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].at(0) == 2);
  }
  SUBCASE("unstable bare edge admits no partition") {
    LabeledTree t(2, {{0, 1}}, {});
    CHECK(admissible_partitions(t, 1).empty());
  }
  SUBCASE("k=4 two-vertex tree splits degree one in two ways") {
    auto parts = admissible_partitions(two_vertex_tree(), 1);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].at(0) == 0);
    CHECK(parts[0].at(1) == 1);
    CHECK(parts[1].at(0) == 1);
    CHECK(parts[1].at(1) == 0);
  }
}

TEST_CASE("check_gromov_curves") {
  const int s = 2;
  SUBCASE("constant sequence with identity reparametrizations") {
    std::mt19937_64 rng(127);
    NodalCurve c = random_stable_curve(rng, two_vertex_tree(), s);
    std::vector<GromovSequenceElement> seq;
    for (int i = 0; i < 8; ++i) {
      GromovSequenceElement el;
      el.curve = c;
      el.hom = TreeHom{{0, 1}};
      el.reparam = identity_reparam(c.tree, s);
      seq.push_back(el);
    }
    GromovReport r = check_gromov_curves(seq, c);
    CHECK(r.pass);
    CHECK(r.clause("marked").max_tail_residual < 1e-12);
    CHECK(r.clause("nodal").max_tail_residual < 1e-12);
    CHECK(r.clause("rescaling").max_tail_residual < 1e-12);
  }
  SUBCASE("bubbling sequence passes all three clauses") {
    auto data = make_bubbling_sequence(s);
    GromovOptions opts;
    opts.tolerance = 1e-5;
    GromovReport r = check_gromov_curves(data.sequence, data.limit, opts);
    INFO("rescaling residual ", r.clause("rescaling").max_tail_residual);
    INFO("nodal residual ", r.clause("nodal").max_tail_residual);
    INFO("marked residual ", r.clause("marked").max_tail_residual);
    CHECK(r.pass);
  }
  SUBCASE("single-clause perturbations fail by name") {
    auto data = make_bubbling_sequence(s);
    GromovOptions opts;
    opts.tolerance = 1e-5;

    NodalCurve marked_bad = data.limit;
    marked_bad.marks.at(5).Z1 += GrassmannNumber(s, 0.1);
    GromovReport r1 = check_gromov_curves(data.sequence, marked_bad, opts);
    CHECK_FALSE(r1.pass);
    CHECK_FALSE(r1.clause("marked").pass);
    CHECK(r1.clause("nodal").pass);
    CHECK(r1.clause("rescaling").pass);

    NodalCurve rescale_bad = data.limit;
    rescale_bad.nodes.at({1, 0}) =
        ProjectivePoint::affine(GrassmannNumber(s, 0.1), GrassmannNumber(s));
    GromovReport r2 = check_gromov_curves(data.sequence, rescale_bad, opts);
    CHECK_FALSE(r2.pass);
    CHECK(r2.clause("marked").pass);
    CHECK(r2.clause("nodal").pass);
    CHECK_FALSE(r2.clause("rescaling").pass);

    NodalCurve nodal_bad = data.limit;
    nodal_bad.nodes.at({2, 1}) = ProjectivePoint(GrassmannNumber(s, 1.0), GrassmannNumber(s, 0.1),
                                                 GrassmannNumber::generator(s, 2) * Coeff{0.4});
    GromovReport r3 = check_gromov_curves(data.sequence, nodal_bad, opts);
    CHECK_FALSE(r3.pass);
    CHECK(r3.clause("marked").pass);
    CHECK_FALSE(r3.clause("nodal").pass);
    CHECK(r3.clause("rescaling").pass);
  }
  SUBCASE("verdict is covariant under reparametrization") {
    auto data = make_bubbling_sequence(s);
    std::mt19937_64 rng(131);
    // transform sequence curves by arbitrary element-tree reparametrizations
    // and the limit by a fixed one; adjust the declared maps accordingly
    Reparam h = random_reparam(rng, data.limit.tree, s);
    Reparam h_inv;
    for (const auto& l : h.per_vertex) h_inv.per_vertex.push_back(inverse(l));
    NodalCurve new_limit = reparametrize(data.limit, h);
    std::vector<GromovSequenceElement> new_seq;
    for (const auto& el : data.sequence) {
      Reparam hat = random_reparam(rng, el.curve.tree, s);
      GromovSequenceElement out;
      out.curve = NodalCurve();
      {
        NodalCurve moved = el.curve;
        for (auto& [e, p] : moved.nodes) p = act(hat.per_vertex[e.first], p);
        for (auto& [i, p] : moved.marks) p = act(hat.per_vertex[moved.tree.labels.at(i)], p);
        out.curve = moved;
      }
      out.hom = el.hom;
      for (int v = 0; v < data.limit.tree.num_vertices; ++v) {
        SpGL21 adjusted = compose(compose(h_inv.per_vertex[v], el.reparam.per_vertex[v]),
                                  hat.per_vertex[el.hom(v)]);
        out.reparam.per_vertex.push_back(adjusted);
      }
      new_seq.push_back(out);
    }
    GromovOptions opts;
    opts.tolerance = 1e-3;  // headroom for the fixed distortion by h
    GromovReport before = check_gromov_curves(data.sequence, data.limit, opts);
    GromovReport after = check_gromov_curves(new_seq, new_limit, opts);
    CHECK(before.pass == after.pass);
    CHECK(after.pass);
  }
  SUBCASE("post-composing the reparametrizations with a fixed element") {
    // limit vertices are reparametrized by h; the pulled-back limit moves
    // by the inverse, and the verdict survives
    auto data = make_bubbling_sequence(s);
    std::mt19937_64 rng(139);
    Reparam h = random_reparam(rng, data.limit.tree, s);
    Reparam h_inv;
    for (const auto& l : h.per_vertex) h_inv.per_vertex.push_back(inverse(l));
    NodalCurve new_limit = reparametrize(data.limit, h_inv);
    std::vector<GromovSequenceElement> new_seq = data.sequence;
    for (auto& el : new_seq)
      for (int v = 0; v < data.limit.tree.num_vertices; ++v)
        el.reparam.per_vertex[v] = compose(h.per_vertex[v], el.reparam.per_vertex[v]);
    GromovOptions opts;
    opts.tolerance = 1e-3;
    CHECK(check_gromov_curves(data.sequence, data.limit, opts).pass);
    CHECK(check_gromov_curves(new_seq, new_limit, opts).pass);
  }
  SUBCASE("structural mismatch is reported") {
    std::mt19937_64 rng(137);
    NodalCurve c = random_stable_curve(rng, two_vertex_tree(), s);
    GromovSequenceElement el;
    el.curve = c;
    el.hom = TreeHom{{0, 0}};  // collapses but breaks the labels
    el.reparam = identity_reparam(c.tree, s);
    GromovReport r = check_gromov_curves({el}, c);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.structural_errors.empty());
  }
}
