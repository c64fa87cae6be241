#include "supermoduli/json_io.hpp"

#include <bit>
#include <sstream>

namespace supermoduli::io {

namespace {

std::pair<int, int> parse_edge_key(const std::string& key) {
  auto dash = key.find('-');
  if (dash == std::string::npos)
    throw std::invalid_argument("edge key must look like \"a-b\", got: " + key);
  return {std::stoi(key.substr(0, dash)), std::stoi(key.substr(dash + 1))};
}

std::string edge_key(const std::pair<int, int>& e) {
  return std::to_string(e.first) + "-" + std::to_string(e.second);
}

}  // namespace

json to_json(const GrassmannNumber& g) {
  json terms = json::array();
  for (const auto& [subset, c] : g.terms()) {
    json indices = json::array();
    std::uint64_t bits = subset;
    while (bits) {
      indices.push_back(std::countr_zero(bits) + 1);
      bits &= bits - 1;
    }
    terms.push_back(json::array({indices, c.real(), c.imag()}));
  }
  return json{{"s", g.generators()}, {"terms", terms}};
}

GrassmannNumber grassmann_from_json(const json& j) {
  GrassmannNumber g(j.at("s").get<int>());
  for (const auto& term : j.at("terms")) {
    std::vector<int> indices = term.at(0).get<std::vector<int>>();
    Coeff c{term.at(1).get<double>(), term.at(2).get<double>()};
    g += GrassmannNumber::term(g.generators(), indices, c);
  }
  return g;
}

json to_json(const SDim& d) { return json{{"even", d.even}, {"odd", d.odd}}; }

SDim sdim_from_json(const json& j) {
  return SDim{j.at("even").get<int>(), j.at("odd").get<int>()};
}

json to_json(const SuperMatrix& m) {
  json entries = json::array();
  for (int i = 0; i < m.num_rows(); ++i) {
    json row = json::array();
    for (int jcol = 0; jcol < m.num_cols(); ++jcol) row.push_back(to_json(m.at(i, jcol)));
    entries.push_back(row);
  }
  return json{{"rows", {m.row_dims.even, m.row_dims.odd}},
              {"cols", {m.col_dims.even, m.col_dims.odd}},
              {"parity", m.declared_parity == Parity::Odd ? "odd" : "even"},
              {"entries", entries}};
}

SuperMatrix matrix_from_json(const json& j) {
  SDim rows{j.at("rows").at(0).get<int>(), j.at("rows").at(1).get<int>()};
  SDim cols{j.at("cols").at(0).get<int>(), j.at("cols").at(1).get<int>()};
  std::string parity = j.at("parity").get<std::string>();
  std::vector<std::vector<GrassmannNumber>> entries;
  for (const auto& row : j.at("entries")) {
    std::vector<GrassmannNumber> out;
    for (const auto& e : row) out.push_back(grassmann_from_json(e));
    entries.push_back(std::move(out));
  }
  return SuperMatrix(rows, cols, parity == "odd" ? Parity::Odd : Parity::Even,
                     std::move(entries));
}

json to_json(const ProjectivePoint& p) {
  return json{{"Z1", to_json(p.Z1)}, {"Z2", to_json(p.Z2)}, {"Theta", to_json(p.Theta)}};
}

ProjectivePoint point_from_json(const json& j) {
  return ProjectivePoint(grassmann_from_json(j.at("Z1")), grassmann_from_json(j.at("Z2")),
                         grassmann_from_json(j.at("Theta")));
}

json to_json(const SpGL21& l) {
  json j = to_json(l.mat);
  j["verified"] = true;  // construction enforces the relations
  return j;
}

SpGL21 spgl21_from_json(const json& j) { return SpGL21(matrix_from_json(j)); }

json to_json(const LabeledTree& t) {
  json edges = json::array();
  for (auto [u, v] : t.edges) edges.push_back(json::array({u, v}));
  json labels = json::object();
  for (auto [i, v] : t.labels) labels[std::to_string(i)] = v;
  return json{{"n", t.num_vertices}, {"edges", edges}, {"labels", labels}};
}

LabeledTree tree_from_json(const json& j) {
  std::set<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    int u = e.at(0).get<int>(), v = e.at(1).get<int>();
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  std::map<int, int> labels;
  for (const auto& [key, v] : j.at("labels").items()) labels[std::stoi(key)] = v.get<int>();
  return LabeledTree(j.at("n").get<int>(), std::move(edges), std::move(labels));
}

json to_json(const NodalCurve& c) {
  json nodes = json::object();
  for (const auto& [e, p] : c.nodes) nodes[edge_key(e)] = to_json(p);
  json marks = json::object();
  for (const auto& [i, p] : c.marks) marks[std::to_string(i)] = to_json(p);
  return json{{"tree", to_json(c.tree)}, {"nodes", nodes}, {"marks", marks}};
}

NodalCurve curve_from_json(const json& j, double min_separation) {
  LabeledTree tree = tree_from_json(j.at("tree"));
  std::map<std::pair<int, int>, ProjectivePoint> nodes;
  for (const auto& [key, p] : j.at("nodes").items())
    nodes.emplace(parse_edge_key(key), point_from_json(p));
  std::map<int, ProjectivePoint> marks;
  for (const auto& [key, p] : j.at("marks").items())
    marks.emplace(std::stoi(key), point_from_json(p));
  return NodalCurve(std::move(tree), std::move(nodes), std::move(marks), min_separation);
}

json to_json(const Reparam& g) {
  json out = json::array();
  for (const auto& l : g.per_vertex) out.push_back(to_json(l));
  return out;
}

Reparam reparam_from_json(const json& j) {
  Reparam g;
  for (const auto& l : j) g.per_vertex.push_back(spgl21_from_json(l));
  return g;
}

json to_json(const StableMapSkeleton& s) {
  json degrees = json::object();
  for (auto [v, d] : s.degrees) degrees[std::to_string(v)] = d;
  json values = json::object();
  for (const auto& [e, vec] : s.node_values) {
    json arr = json::array();
    for (const auto& g : vec) arr.push_back(to_json(g));
    values[edge_key(e)] = arr;
  }
  return json{{"curve", to_json(s.curve)}, {"degrees", degrees}, {"node_values", values}};
}

StableMapSkeleton skeleton_from_json(const json& j) {
  StableMapSkeleton s;
  s.curve = curve_from_json(j.at("curve"));
  for (const auto& [key, d] : j.at("degrees").items()) s.degrees[std::stoi(key)] = d.get<int>();
  for (const auto& [key, arr] : j.at("node_values").items()) {
    std::vector<GrassmannNumber> vec;
    for (const auto& g : arr) vec.push_back(grassmann_from_json(g));
    s.node_values.emplace(parse_edge_key(key), std::move(vec));
  }
  return s;
}

json to_json(const MapCheckReport& r) {
  return json{{"pass", r.pass},
              {"stability_violations", r.stability_violations},
              {"node_violations", r.node_violations},
              {"structural_errors", r.structural_errors}};
}

json to_json(const GromovReport& r) {
  json clauses = json::array();
  for (const auto& c : r.clauses)
    clauses.push_back(json{{"clause", c.clause},
                           {"pass", c.pass},
                           {"residuals", c.residuals},
                           {"max_tail_residual", c.max_tail_residual}});
  return json{{"pass", r.pass}, {"structural_errors", r.structural_errors}, {"clauses", clauses}};
}

std::string report_text(const GromovReport& r) {
  std::ostringstream out;
  out << (r.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& e : r.structural_errors) out << "structural error: " << e << "\n";
  for (const auto& c : r.clauses)
    out << "  clause " << c.clause << ": " << (c.pass ? "pass" : "FAIL")
        << " (max tail residual " << c.max_tail_residual << ")\n";
  return out.str();
}

std::vector<GromovSequenceElement> sequence_from_json(const json& j) {
  std::vector<GromovSequenceElement> out;
  for (const auto& item : j) {
    GromovSequenceElement el;
    el.curve = curve_from_json(item.at("curve"), 1e-15);
    el.hom = TreeHom{item.at("hom").get<std::vector<int>>()};
    el.reparam = reparam_from_json(item.at("reparam"));
    out.push_back(std::move(el));
  }
  return out;
}

json to_json(const GeodesicSolution& sol) {
  json samples = json::array();
  for (size_t i = 0; i < sol.t_samples.size(); ++i) {
    json pos = json::array(), vel = json::array();
    for (const auto& g : sol.positions[i].coords) pos.push_back(to_json(g));
    for (const auto& g : sol.velocities[i].coords) vel.push_back(to_json(g));
    samples.push_back(json{{"t", sol.t_samples[i]}, {"position", pos}, {"velocity", vel}});
  }
  return json{{"step", sol.step_size}, {"samples", samples}};
}

std::string geodesic_csv(const GeodesicSolution& sol) {
  std::ostringstream out;
  out << "t";
  for (int a = 0; a < sol.p.dims.even; ++a) out << ",re_x" << a << ",im_x" << a;
  out << "\n";
  out.precision(17);
  for (size_t i = 0; i < sol.t_samples.size(); ++i) {
    out << sol.t_samples[i];
    for (int a = 0; a < sol.p.dims.even; ++a) {
      Coeff b = sol.positions[i].coords[a].body();
      out << "," << b.real() << "," << b.imag();
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace supermoduli::io
