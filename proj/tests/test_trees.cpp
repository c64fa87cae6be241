#include <algorithm>
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "supermoduli/trees.hpp"

using namespace supermoduli;

namespace {

LabeledTree single_vertex(int k) {
  std::map<int, int> labels;
  for (int i = 1; i <= k; ++i) labels[i] = 0;
  return LabeledTree(1, {}, labels);
}

/// Independent exhaustive oracle: count isomorphism classes of stable
/// k-labeled trees by pairwise isomorphism search over all Prüfer codes.
int oracle_count_stable(int k) {
  std::vector<LabeledTree> reps;
  for (int n = 1; n <= k - 2; ++n) {
    // every labeled tree on n vertices, from all (n-2)-digit base-n codes
    std::vector<std::set<std::pair<int, int>>> shapes;
    if (n == 1) {
      shapes.push_back({});
    } else if (n == 2) {
      shapes.push_back({{0, 1}});
    } else {
      // smallest-leaf-first decode, deliberately different from the
      // library's priority-queue version
      std::vector<int> seq(n - 2, 0);
      while (true) {
        std::vector<int> deg(n, 1);
        for (int v : seq) ++deg[v];
        std::set<std::pair<int, int>> edges;
        for (int v : seq) {
          for (int u = 0; u < n; ++u) {
            if (deg[u] == 1) {
              edges.insert({std::min(u, v), std::max(u, v)});
              --deg[u];
              --deg[v];
              break;
            }
          }
        }
        int u = -1, w = -1;
        for (int x = 0; x < n; ++x)
          if (deg[x] == 1) (u < 0 ? u : w) = x;
        edges.insert({std::min(u, w), std::max(u, w)});
        shapes.push_back(edges);
        int i = n - 3;
        while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
        if (i < 0) break;
        ++seq[i];
      }
    }
    for (const auto& edges : shapes) {
      std::vector<int> assign(k, 0);
      while (true) {
        std::map<int, int> labels;
        for (int i = 0; i < k; ++i) labels[i + 1] = assign[i];
        LabeledTree t(n, edges, labels);
        if (is_stable(t)) {
          bool known = false;
          for (const auto& r : reps)
            if (find_label_isomorphism(t, r).has_value()) {
              known = true;
              break;
            }
          if (!known) reps.push_back(t);
        }
        int i = k - 1;
        while (i >= 0 && assign[i] == n - 1) assign[i--] = 0;
        if (i < 0) break;
        ++assign[i];
      }
    }
  }
  return static_cast<int>(reps.size());
}

}  // namespace

TEST_CASE("is_stable") {
  CHECK(is_stable(single_vertex(3)));
  CHECK_FALSE(is_stable(single_vertex(2)));
  // two vertices, one edge, labels {1,2} -> v0 and {3,4} -> v1
  LabeledTree two(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
  CHECK(is_stable(two));
  LabeledTree lop(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 0}, {4, 1}});
  CHECK_FALSE(is_stable(lop));
}

TEST_CASE("tree validation") {
  CHECK_THROWS_AS(LabeledTree(3, {{0, 1}}, {}), std::invalid_argument);           // too few edges
  CHECK_THROWS_AS(LabeledTree(4, {{0, 1}, {2, 3}, {0, 2}, {1, 3}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledTree(2, {{0, 1}}, {{2, 0}}), std::invalid_argument);     // labels not 1..k
}

TEST_CASE("canonical_form") {
  SUBCASE("relabeling vertices leaves the encoding unchanged") {
    LabeledTree path(3, {{0, 1}, {1, 2}}, {{1, 0}, {2, 0}, {3, 1}, {4, 2}, {5, 2}});
    LabeledTree perm = permute_vertices(path, {2, 0, 1});
    CHECK(canonical_form(path) == canonical_form(perm));
    CHECK(find_label_isomorphism(path, perm).has_value());
  }
  SUBCASE("swapping labels on distinct vertices changes the encoding") {
    LabeledTree a(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
    LabeledTree b(2, {{0, 1}}, {{1, 0}, {3, 0}, {2, 1}, {4, 1}});
    CHECK(canonical_form(a) != canonical_form(b));
  }
  SUBCASE("the three 2+2 splits of k=4 are pairwise distinct") {
    LabeledTree s12(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
    LabeledTree s13(2, {{0, 1}}, {{1, 0}, {3, 0}, {2, 1}, {4, 1}});
    LabeledTree s14(2, {{0, 1}}, {{1, 0}, {4, 0}, {2, 1}, {3, 1}});
    CHECK(canonical_form(s12) != canonical_form(s13));
    CHECK(canonical_form(s12) != canonical_form(s14));
    CHECK(canonical_form(s13) != canonical_form(s14));
    CHECK_FALSE(find_label_isomorphism(s12, s13).has_value());
  }
  SUBCASE("equal encodings iff an explicit isomorphism exists") {
    std::mt19937_64 rng(79);
    auto trees5 = enumerate_stable(5);
    for (int rep = 0; rep < 60; ++rep) {
      const LabeledTree& a = trees5[rng() % trees5.size()];
      LabeledTree b = trees5[rng() % trees5.size()];
      if (rep % 2 == 0) {
        // positive pairs: scramble the vertex names of a copy of a
        std::vector<int> perm(a.num_vertices);
        for (int i = 0; i < a.num_vertices; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        b = permute_vertices(a, perm);
      }
      bool same = canonical_form(a) == canonical_form(b);
      CHECK(same == find_label_isomorphism(a, b).has_value());
    }
  }
  SUBCASE("cross-checked by raw permutation search on 6-vertex trees") {
    // random (not necessarily stable) trees with 6 vertices and 3 labels
    std::mt19937_64 rng(81);
    auto raw_isomorphic = [](const LabeledTree& a, const LabeledTree& b) {
      std::vector<int> perm(a.num_vertices);
      for (int i = 0; i < a.num_vertices; ++i) perm[i] = i;
      do {
        bool ok = true;
        for (auto [u, v] : a.edges)
          if (!b.has_edge(perm[u], perm[v])) {
            ok = false;
            break;
          }
        if (ok)
          for (auto [i, v] : a.labels)
            if (b.labels.at(i) != perm[v]) {
              ok = false;
              break;
            }
        if (ok) return true;
      } while (std::next_permutation(perm.begin(), perm.end()));
      return false;
    };
    auto random_tree = [&](int n, int k) {
      std::set<std::pair<int, int>> edges;
      for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng() % v);
        edges.insert({u, v});
      }
      std::map<int, int> labels;
      for (int i = 1; i <= k; ++i) labels[i] = static_cast<int>(rng() % n);
      return LabeledTree(n, edges, labels);
    };
    for (int rep = 0; rep < 40; ++rep) {
      LabeledTree a = random_tree(6, 3);
      LabeledTree b = random_tree(6, 3);
      if (rep % 2 == 0) {
        std::vector<int> perm = {0, 1, 2, 3, 4, 5};
        std::shuffle(perm.begin(), perm.end(), rng);
        b = permute_vertices(a, perm);
      }
      bool same = canonical_form(a) == canonical_form(b);
      CHECK(same == raw_isomorphic(a, b));
    }
  }
}

TEST_CASE("enumerate_stable") {
  SUBCASE("k=3 has exactly one stable tree") {
    auto trees = enumerate_stable(3);
    REQUIRE(trees.size() == 1);
    CHECK(trees[0].num_vertices == 1);
  }
  SUBCASE("k=4 has the one-vertex tree plus three 2+2 splits") {
    auto trees = enumerate_stable(4);
    CHECK(trees.size() == 4);
    int one_vertex = 0, two_vertex = 0;
    for (const auto& t : trees) (t.num_vertices == 1 ? one_vertex : two_vertex)++;
    CHECK(one_vertex == 1);
    CHECK(two_vertex == 3);
  }
  SUBCASE("k=5 count matches the independent oracle") {
    auto trees = enumerate_stable(5);
    CHECK(static_cast<int>(trees.size()) == oracle_count_stable(5));
    CHECK(trees.size() == 26);  // 1 + 10 two-vertex + 15 three-vertex
  }
  SUBCASE("enumeration is duplicate-free under canonical_form") {
    auto trees = enumerate_stable(5);
    std::set<std::string> keys;
    for (const auto& t : trees) keys.insert(canonical_form(t));
    CHECK(keys.size() == trees.size());
  }
  SUBCASE("max_vertices bound is honored") {
    CHECK(enumerate_stable(5, 1).size() == 1);
    CHECK(enumerate_stable(5, 2).size() == 11);
  }
}

TEST_CASE("stabilize") {
  SUBCASE("already stable trees are unchanged") {
    LabeledTree t(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
    LabeledTree r = stabilize(t);
    CHECK(canonical_form(r) == canonical_form(t));
  }
  SUBCASE("a path collapses onto its labeled middle vertex") {
    LabeledTree t(3, {{0, 1}, {1, 2}}, {{1, 1}, {2, 1}, {3, 1}});
    LabeledTree r = stabilize(t);
    CHECK(r.num_vertices == 1);
    CHECK(r.num_labels() == 3);
  }
  SUBCASE("idempotent") {
    LabeledTree t(4, {{0, 1}, {1, 2}, {2, 3}}, {{1, 0}, {2, 0}, {3, 3}, {4, 3}});
    LabeledTree r = stabilize(t);
    CHECK(is_stable(r));
    CHECK(canonical_form(stabilize(r)) == canonical_form(r));
  }
  SUBCASE("non-constant vertices survive") {
    // leaf vertex with no labels would collapse, but the marker keeps it
    LabeledTree t(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 0}});
    LabeledTree r = stabilize(t, {{1, 1}});
    CHECK(r.num_vertices == 2);
    LabeledTree collapsed = stabilize(t);
    CHECK(collapsed.num_vertices == 1);
  }
  SUBCASE("uncollapsible input is an error") {
    CHECK_THROWS_AS(stabilize(single_vertex(2)), std::domain_error);
  }
}

TEST_CASE("tree homomorphisms") {
  LabeledTree src(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
  LabeledTree dst = single_vertex(4);
  SUBCASE("collapsing homomorphism is valid but not strict") {
    TreeHom f{{0, 0}};
    bool strict = true;
    CHECK(hom_is_valid(src, dst, f, &strict));
    CHECK_FALSE(strict);
  }
  SUBCASE("identity homomorphism is strict") {
    TreeHom f{{0, 1}};
    bool strict = false;
    CHECK(hom_is_valid(src, src, f, &strict));
    CHECK(strict);
  }
  SUBCASE("label mismatch invalidates") {
    TreeHom f{{1, 0}};
    CHECK_FALSE(hom_is_valid(src, src, f));
  }
}
