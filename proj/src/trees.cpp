#include "supermoduli/trees.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace supermoduli {

LabeledTree::LabeledTree(int n, std::set<std::pair<int, int>> e, std::map<int, int> l)
    : num_vertices(n), edges(std::move(e)), labels(std::move(l)) {
  validate();
}

void LabeledTree::validate() const {
  if (num_vertices < 1) throw std::invalid_argument("tree needs at least one vertex");
  for (auto [u, v] : edges) {
    if (u >= v || u < 0 || v >= num_vertices)
      throw std::invalid_argument("edge endpoints out of range or misordered");
  }
  if (static_cast<int>(edges.size()) != num_vertices - 1)
    throw std::invalid_argument("a tree has exactly n-1 edges");
  std::vector<bool> seen(num_vertices, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  auto adj = adjacency();
  int reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        q.push(w);
      }
  }
  if (reached != num_vertices) throw std::invalid_argument("tree is not connected");
  int expect = 1;
  for (auto [i, v] : labels) {
    if (i != expect++) throw std::invalid_argument("labels must be 1..k");
    if (v < 0 || v >= num_vertices) throw std::invalid_argument("label vertex out of range");
  }
}

std::vector<std::vector<int>> LabeledTree::adjacency() const {
  std::vector<std::vector<int>> adj(num_vertices);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

int LabeledTree::degree(int v) const {
  int d = 0;
  for (auto [a, b] : edges)
    if (a == v || b == v) ++d;
  return d;
}

int LabeledTree::labels_at(int v) const {
  int n = 0;
  for (auto [i, w] : labels) {
    (void)i;
    if (w == v) ++n;
  }
  return n;
}

std::vector<int> LabeledTree::neighbors(int v) const {
  std::vector<int> out;
  for (auto [a, b] : edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  return out;
}

bool LabeledTree::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return edges.count({u, v}) > 0;
}

bool hom_is_valid(const LabeledTree& src, const LabeledTree& dst, const TreeHom& f, bool* strict) {
  if (static_cast<int>(f.vertex_map.size()) != src.num_vertices) return false;
  for (int v : f.vertex_map)
    if (v < 0 || v >= dst.num_vertices) return false;
  if (src.num_labels() != dst.num_labels()) return false;
  for (auto [i, v] : src.labels)
    if (dst.labels.at(i) != f(v)) return false;
  bool all_strict = true;
  for (auto [u, v] : src.edges) {
    if (f(u) == f(v)) {
      all_strict = false;  // collapsed edge
    } else if (!dst.has_edge(f(u), f(v))) {
      return false;
    }
  }
  if (strict) *strict = all_strict;
  return true;
}

bool is_stable(const LabeledTree& t) {
  for (int v = 0; v < t.num_vertices; ++v)
    if (t.special_count(v) < 3) return false;
  return true;
}

namespace {

std::vector<int> centroids(const LabeledTree& t) {
  int n = t.num_vertices;
  if (n == 1) return {0};
  auto adj = t.adjacency();
  std::vector<int> deg(n);
  std::vector<bool> removed(n, false);
  std::queue<int> leaves;
  for (int v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(adj[v].size());
    if (deg[v] == 1) leaves.push(v);
  }
  int remaining = n;
  while (remaining > 2) {
    int cnt = static_cast<int>(leaves.size());
    remaining -= cnt;
    for (int i = 0; i < cnt; ++i) {
      int v = leaves.front();
      leaves.pop();
      removed[v] = true;
      for (int w : adj[v])
        if (!removed[w] && --deg[w] == 1) leaves.push(w);
    }
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (!removed[v]) out.push_back(v);
  return out;
}

std::string encode_rooted(const LabeledTree& t, const std::vector<std::vector<int>>& adj, int v,
                          int parent) {
  std::string s = "(";
  for (auto [i, w] : t.labels)
    if (w == v) s += "L" + std::to_string(i) + ",";
  std::vector<std::string> kids;
  for (int w : adj[v])
    if (w != parent) kids.push_back(encode_rooted(t, adj, w, v));
  std::sort(kids.begin(), kids.end());
  for (const auto& k : kids) s += k;
  s += ")";
  return s;
}

}  // namespace

std::string canonical_form(const LabeledTree& t) {
  auto adj = t.adjacency();
  std::string best;
  for (int c : centroids(t)) {
    std::string enc = encode_rooted(t, adj, c, -1);
    if (best.empty() || enc < best) best = enc;
  }
  return best;
}

std::optional<TreeHom> find_label_isomorphism(const LabeledTree& a, const LabeledTree& b) {
  if (a.num_vertices != b.num_vertices || a.num_labels() != b.num_labels()) return std::nullopt;
  if (canonical_form(a) != canonical_form(b)) return std::nullopt;
  const int n = a.num_vertices;
  std::vector<int> map(n, -1), used(n, 0);
  std::function<bool(int)> extend = [&](int v) -> bool {
    if (v == n) {
      TreeHom f{map};
      bool strict = false;
      // a strict label-preserving hom between trees on equally many
      // vertices is an isomorphism
      return hom_is_valid(a, b, f, &strict) && strict;
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
      if (extend(v + 1)) return true;
      used[w] = 0;
      map[v] = -1;
    }
    return false;
  };
  if (extend(0)) return TreeHom{map};
  return std::nullopt;
}

LabeledTree permute_vertices(const LabeledTree& t, const std::vector<int>& perm) {
  std::set<std::pair<int, int>> edges;
  for (auto [u, v] : t.edges) {
    int a = perm[u], b = perm[v];
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
  }
  std::map<int, int> labels;
  for (auto [i, v] : t.labels) labels[i] = perm[v];
  return LabeledTree(t.num_vertices, std::move(edges), std::move(labels));
}

namespace {

/// All trees on n vertices, decoded from Prüfer sequences.
std::vector<std::set<std::pair<int, int>>> all_trees(int n) {
  std::vector<std::set<std::pair<int, int>>> out;
  if (n == 1) {
    out.push_back({});
    return out;
  }
  if (n == 2) {
    out.push_back({{0, 1}});
    return out;
  }
  std::vector<int> seq(n - 2, 0);
  while (true) {
    std::vector<int> deg(n, 1);
    for (int v : seq) ++deg[v];
    std::set<std::pair<int, int>> edges;
    std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
    for (int v = 0; v < n; ++v)
      if (deg[v] == 1) leaves.push(v);
    for (int v : seq) {
      int leaf = leaves.top();
      leaves.pop();
      edges.insert({std::min(leaf, v), std::max(leaf, v)});
      if (--deg[v] == 1) leaves.push(v);
      deg[leaf] = 0;
    }
    int u = leaves.top();
    leaves.pop();
    int v = leaves.top();
    edges.insert({std::min(u, v), std::max(u, v)});
    out.push_back(std::move(edges));

    int i = n - 3;
    while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
    if (i < 0) break;
    ++seq[i];
  }
  return out;
}

}  // namespace

std::vector<LabeledTree> enumerate_stable(int k, int max_vertices) {
  if (k < 3) throw std::invalid_argument("enumerate_stable requires k >= 3");
  if (k > 7)
    throw std::invalid_argument("enumerate_stable: brute-force enumeration supports k <= 7");
  int bound = k - 2;  // each extra vertex consumes label capacity
  if (max_vertices > 0) bound = std::min(bound, max_vertices);
  std::map<std::string, LabeledTree> found;
  for (int n = 1; n <= bound; ++n) {
    for (const auto& edges : all_trees(n)) {
      std::vector<int> assign(k, 0);
      while (true) {
        std::map<int, int> labels;
        for (int i = 0; i < k; ++i) labels[i + 1] = assign[i];
        LabeledTree t(n, edges, labels);
        if (is_stable(t)) found.emplace(canonical_form(t), t);
        int i = k - 1;
        while (i >= 0 && assign[i] == n - 1) assign[i--] = 0;
        if (i < 0) break;
        ++assign[i];
      }
    }
  }
  std::vector<std::pair<std::string, LabeledTree>> items(found.begin(), found.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second.num_vertices != b.second.num_vertices)
      return a.second.num_vertices < b.second.num_vertices;
    return a.first < b.first;
  });
  std::vector<LabeledTree> out;
  out.reserve(items.size());
  for (auto& [key, t] : items) {
    (void)key;
    out.push_back(std::move(t));
  }
  return out;
}

LabeledTree stabilize(const LabeledTree& t, const std::map<int, int>& extra_special) {
  LabeledTree cur = t;
  std::map<int, int> extra = extra_special;
  while (true) {
    int victim = -1;
    for (int v = 0; v < cur.num_vertices; ++v) {
      auto it = extra.find(v);
      int bonus = (it == extra.end()) ? 0 : it->second;
      if (bonus >= 1) continue;  // non-constant component, never collapsed
      if (cur.special_count(v) < 3) {
        victim = v;
        break;
      }
    }
    if (victim < 0) return cur;
    auto nbrs = cur.neighbors(victim);
    if (nbrs.empty())
      throw std::domain_error("stabilize: single unstable vertex cannot be collapsed");
    int target = *std::min_element(nbrs.begin(), nbrs.end());

    std::set<std::pair<int, int>> edges;
    for (auto [u, v] : cur.edges) {
      if (u == victim) u = target;
      if (v == victim) v = target;
      if (u == v) continue;
      edges.insert({std::min(u, v), std::max(u, v)});
    }
    std::map<int, int> labels = cur.labels;
    for (auto& [i, v] : labels)
      if (v == victim) v = target;

    std::vector<int> remap(cur.num_vertices, -1);
    int next = 0;
    for (int v = 0; v < cur.num_vertices; ++v)
      if (v != victim) remap[v] = next++;
    std::set<std::pair<int, int>> edges2;
    for (auto [u, v] : edges) {
      int na = remap[u], nb = remap[v];
      edges2.insert({std::min(na, nb), std::max(na, nb)});
    }
    for (auto& [i, v] : labels) v = remap[v];
    std::map<int, int> extra2;
    for (auto [v, bonus] : extra) {
      if (v == victim) continue;
      extra2[remap[v]] = bonus;
    }
    cur = LabeledTree(cur.num_vertices - 1, std::move(edges2), std::move(labels));
    extra = std::move(extra2);
  }
}

}  // namespace supermoduli
