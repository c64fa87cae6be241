// Command-line front end: every subcommand reads one JSON document (file or
// stdin) and writes one JSON/CSV/text document to stdout. Exit codes:
// 0 success/pass, 1 validation failure, 2 malformed input.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "supermoduli/json_io.hpp"

using namespace supermoduli;
using nlohmann::json;

namespace {

struct Config {
  int s = 4;
  double pruning = 1e-14;
  double invertibility = 1e-10;
  double projective = 1e-9;
  double convergence = 1e-6;
  double grid_radius = 2.0;
  int tail = 5;

  void load(const json& j) {
    if (j.contains("s")) s = j.at("s").get<int>();
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      if (t.contains("pruning")) pruning = t.at("pruning").get<double>();
      if (t.contains("invertibility")) invertibility = t.at("invertibility").get<double>();
      if (t.contains("projective")) projective = t.at("projective").get<double>();
      if (t.contains("convergence")) convergence = t.at("convergence").get<double>();
    }
    if (j.contains("grid_radius")) grid_radius = j.at("grid_radius").get<double>();
    if (j.contains("tail")) tail = j.at("tail").get<int>();
  }

  void validate() const {
    if (s < 0 || s > kMaxGenerators) throw std::invalid_argument("config: s out of range");
    if (pruning <= 0 || invertibility <= 0 || projective <= 0 || convergence <= 0)
      throw std::invalid_argument("config: tolerances must be positive");
    if (grid_radius <= 0 || tail < 1) throw std::invalid_argument("config: invalid grid or tail");
  }

  void apply() const {
    kPruneEps = pruning;
    kInvertEps = invertibility;
  }
};

json read_input(const std::string& path) {
  if (path == "-" || path.empty()) {
    json j;
    std::cin >> j;
    return j;
  }
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  json j;
  in >> j;
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<GrassmannNumber> coords_from_json(const json& j, int s) {
  std::vector<GrassmannNumber> out;
  for (const auto& item : j) {
    if (item.is_number()) {
      out.push_back(GrassmannNumber(s, item.get<double>()));
    } else {
      out.push_back(io::grassmann_from_json(item).extended(s));
    }
  }
  return out;
}

struct MetricBundle {
  ChristoffelSource src;
  MetricSource metric;
};

MetricBundle make_metric(const std::string& name, const std::string& dims_flag, int s) {
  auto parse_dims = [&]() {
    SDim d{0, 0};
    std::istringstream ss(dims_flag);
    char comma;
    if (!(ss >> d.even >> comma >> d.odd))
      throw std::invalid_argument("geodesic: --dims must look like \"m,n\"");
    return d;
  };
  if (name == "flat") {
    SDim d = dims_flag.empty() ? SDim{2, 2} : parse_dims();
    return {flat_source(d, s), flat_metric(d, s)};
  }
  if (name == "sphere") {
    return {sphere_source(s), sphere_metric(s)};
  }
  // otherwise a JSON file selecting a member of the restricted family
  json j = read_input(name);
  std::string type = j.at("type").get<std::string>();
  if (type == "flat") {
    SDim d{j.at("dims").at(0).get<int>(), j.at("dims").at(1).get<int>()};
    return {flat_source(d, s), flat_metric(d, s)};
  }
  if (type == "sphere") {
    int odd = j.contains("odd") ? j.at("odd").get<int>() : 2;
    return {sphere_source(s, odd), sphere_metric(s, odd)};
  }
  throw std::invalid_argument(
      "geodesic: unsupported metric type \"" + type +
      "\"; only the restricted family {flat, sphere} is available (a general "
      "super Levi-Civita derivation is out of scope)");
}

int run_selftest(const std::string& format) {
  struct Case {
    std::string name;
    bool ok;
  };
  std::vector<Case> cases;
  auto add = [&](const std::string& name, bool ok) { cases.push_back({name, ok}); };
  const int s = 4;

  {
    auto sol = solve_three_points(ProjectivePoint::zero(s), ProjectivePoint::one(s),
                                  ProjectivePoint::infinity(s));
    add("solve3pt standard triple is the identity",
        distance(sol.map.mat, SuperMatrix::identity(SDim{2, 1}, s)) < 1e-10 &&
            sol.epsilon.is_zero(1e-12));
  }
  {
    GrassmannNumber eta1 = GrassmannNumber::generator(s, 1);
    auto sol = solve_three_points(ProjectivePoint::zero(s), ProjectivePoint::one_eps(eta1),
                                  ProjectivePoint::infinity(s));
    add("solve3pt recovers a purely odd displacement", distance(sol.epsilon, eta1) < 1e-10);
  }
  {
    bool ok = distance(compose(xi_minus(s), xi_minus(s)).mat,
                       SuperMatrix::identity(SDim{2, 1}, s)) == 0.0;
    GrassmannNumber eps = GrassmannNumber::generator(s, 2);
    ok = ok && classify_fixing(xi_minus(s), eps, -eps) == FixingClass::XiMinus;
    ok = ok && classify_fixing(identity_spgl21(s), eps, eps) == FixingClass::Identity;
    add("reflection of the odd direction", ok);
  }
  {
    GrassmannNumber eps = GrassmannNumber::generator(s, 1) * Coeff{0.8};
    SpGL21 l1 = swap_zero_one(eps);
    SpGL21 l2 = swap_one_infinity(eps);
    bool ok = sp21_residual(l1.mat) < 1e-12 && sp21_residual(l2.mat) < 1e-12;
    ok = ok && projectively_equal(act(l1, ProjectivePoint::one_eps(eps)), ProjectivePoint::zero(s));
    ok = ok &&
         projectively_equal(act(l2, ProjectivePoint::one_eps(eps)), ProjectivePoint::infinity(s));
    add("standard-triple permutation matrices", ok);
  }
  {
    bool ok = dim_M0k(3) == SDim{0, 2} && dim_M0k(4) == SDim{2, 4} && dim_M0k(5) == SDim{4, 6};
    ok = ok && dim_M0T(4, 1) == SDim{0, 4};
    ok = ok && dim_stable_maps(1, 2, 3, 0) == SDim{6, 6};
    ok = ok && dim_quotient(SDim{10, 10}, SDim{6, 4}) == SDim{4, 6};
    ok = ok && dim_groupoid(SDim{3, 2}, SDim{4, 1}) == SDim{2, 3};
    add("dimension formulas", ok);
  }
  {
    add("stable tree counts", enumerate_stable(3).size() == 1 && enumerate_stable(4).size() == 4);
  }
  {
    LabeledTree t(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
    add("admissible partitions", admissible_partitions(t, 1).size() == 2);
  }
  {
    RankResult full = standard_rank_form(SuperMatrix::identity(SDim{2, 1}, s));
    SuperMatrix odd_mul(SDim{0, 1}, SDim{1, 0}, Parity::Even,
                        {{GrassmannNumber::generator(s, 1)}});
    RankResult none = standard_rank_form(odd_mul);
    add("standard rank form", full.has_rank() && *full.rank == SDim{2, 1} && !none.has_rank());
  }
  {
    SDim dims{1, 2};
    SuperVector p = SuperVector::zero(dims, s);
    SuperVector v = SuperVector::zero(dims, s);
    v.coords[0] = GrassmannNumber(s, 0.5);
    v.coords[1] = GrassmannNumber::generator(s, 1);
    GeodesicSolution sol = integrate_geodesic(flat_source(dims, s), p, v, 1.0, 0.25);
    SuperVector end = sol.positions[sol.index_of_time(1.0)];
    add("flat geodesics are lines", distance(end, p + v) < 1e-12);
  }
  {
    std::vector<Coeff> phi = {Coeff{1.0}};
    std::vector<GrassmannNumber> sc = {GrassmannNumber::generator(s, 1)};
    std::vector<std::vector<GrassmannNumber>> psi = {{GrassmannNumber::generator(s, 2)}};
    std::vector<std::vector<std::vector<Coeff>>> gamma(1, {{{Coeff{0.0}}}});
    auto out = eval_component_fields(phi, sc, psi, gamma);
    GrassmannNumber expect = GrassmannNumber(s, 1.0) + sc[0] * psi[0][0];
    add("component-field evaluation", distance(out[0], expect) < 1e-14);
  }
  {
    // encode/decode round trips
    GrassmannNumber g = GrassmannNumber(s, Coeff{1.0, -2.0}) +
                        GrassmannNumber::term(s, {1, 3}, Coeff{0.5, 0.25});
    bool ok = distance(io::grassmann_from_json(io::to_json(g)), g) == 0.0;
    ProjectivePoint p = ProjectivePoint::affine(GrassmannNumber(s, Coeff{2.0, 1.0}),
                                                GrassmannNumber::generator(s, 2));
    ok = ok && projective_distance(io::point_from_json(io::to_json(p)), p) == 0.0;
    LabeledTree t(2, {{0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}});
    ok = ok && canonical_form(io::tree_from_json(io::to_json(t))) == canonical_form(t);
    add("JSON round trips", ok);
  }

  bool all = true;
  for (const auto& c : cases) all = all && c.ok;
  if (format == "json") {
    json out = json::array();
    for (const auto& c : cases) out.push_back(json{{"name", c.name}, {"ok", c.ok}});
    emit(json{{"pass", all}, {"cases", out}});
  } else {
    for (const auto& c : cases)
      std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << "\n";
    std::cout << (all ? "selftest: all passed" : "selftest: FAILURES") << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supermoduli: genus-zero super Riemann surface moduli toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Config cfg;
  std::string config_path;
  std::string format = "json";
  int flag_s = 4;
  app.add_option("--config", config_path, "JSON config file (overrides SUPERMODULI_CONFIG)");
  auto* s_opt = app.add_option("--s", flag_s, "number of Grassmann generators for constructed values");
  app.add_option("--format", format, "output format: json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  std::string input = "-";
  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input,-i", input, "input JSON file, '-' for stdin");
  };

  auto* solve3pt = app.add_subcommand("solve3pt", "three-point transitivity solver");
  int branch = 1;
  solve3pt->add_option("--branch", branch, "sign branch, +1 or -1");
  add_input(solve3pt);

  auto* classify = app.add_subcommand("classify", "classify a triple-fixing automorphism");
  add_input(classify);

  auto* pseudoinv = app.add_subcommand("pseudoinv", "pseudoinvariant of a point triple");
  add_input(pseudoinv);

  auto* normalize = app.add_subcommand("normalize", "normalize a vertex of a nodal curve");
  int vertex = 0;
  std::vector<int> choice = {0, 1, 2};
  normalize->add_option("--vertex", vertex, "vertex to normalize");
  normalize->add_option("--choice", choice, "three special-point indices")->expected(3);
  normalize->add_option("--branch", branch, "sign branch, +1 or -1");
  add_input(normalize);

  auto* equiv = app.add_subcommand("equiv", "equivalence of two stable nodal curves");
  add_input(equiv);

  auto* dims = app.add_subcommand("dims", "dimension formulas");
  std::string formula;
  int dk = 3, dedges = 0, dn = 1, dc1 = 0;
  std::vector<int> da = {0, 0}, db = {0, 0};
  dims->add_option("--formula", formula, "m0k|m0t|quotient|groupoid|superj|stablemaps")->required();
  dims->add_option("--k", dk, "number of marked points");
  dims->add_option("--edges", dedges, "number of tree edges");
  dims->add_option("--n", dn, "half the real dimension of the target");
  dims->add_option("--c1", dc1, "pairing of the homology class with c_1");
  dims->add_option("--a", da, "first dimension pair (even odd)")->expected(2);
  dims->add_option("--b", db, "second dimension pair (even odd)")->expected(2);

  auto* trees_cmd = app.add_subcommand("trees", "stable labeled tree operations");
  trees_cmd->require_subcommand(1);
  auto* enumerate = trees_cmd->add_subcommand("enumerate", "all stable k-labeled trees");
  int ek = 4, emax = -1;
  enumerate->add_option("--k", ek, "number of labels")->required();
  enumerate->add_option("--max-vertices", emax, "vertex bound");
  auto* stabilize_cmd = trees_cmd->add_subcommand("stabilize", "collapse unstable vertices");
  add_input(stabilize_cmd);
  auto* canon = trees_cmd->add_subcommand("canon", "canonical isomorphism-class encoding");
  add_input(canon);

  auto* partitions = app.add_subcommand("partitions", "admissible degree partitions");
  add_input(partitions);

  auto* check_map = app.add_subcommand("check-map", "super stable map conditions");
  add_input(check_map);

  auto* check_gromov = app.add_subcommand("check-gromov", "Gromov convergence checker");
  double tol = -1.0;
  int tail = -1;
  check_gromov->add_option("--tolerance", tol, "convergence tolerance");
  check_gromov->add_option("--tail", tail, "declared tail length");
  add_input(check_gromov);

  auto* geodesic = app.add_subcommand("geodesic", "integrate the super geodesic equation");
  std::string metric = "flat", dims_flag;
  std::string p_json = "[]", v_json = "[]";
  double T = 1.0, step = 1e-3;
  geodesic->add_option("--metric", metric, "flat|sphere|file.json");
  geodesic->add_option("--dims", dims_flag, "dimensions m,n for the flat metric");
  geodesic->add_option("--p", p_json, "initial point as a JSON array")->required();
  geodesic->add_option("--v", v_json, "initial velocity as a JSON array")->required();
  geodesic->add_option("--T", T, "integration time bound");
  geodesic->add_option("--step", step, "step size");

  auto* rank_form = app.add_subcommand("rank-form", "standard rank form of an even supermatrix");
  add_input(rank_form);

  auto* selftest = app.add_subcommand("selftest", "run the embedded example corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    // precedence: flags > --config / SUPERMODULI_CONFIG > defaults
    if (const char* env = std::getenv("SUPERMODULI_CONFIG"); env && config_path.empty())
      config_path = env;
    if (!config_path.empty()) cfg.load(read_input(config_path));
    if (s_opt->count() > 0) cfg.s = flag_s;
    cfg.validate();
    cfg.apply();

    if (*solve3pt) {
      json j = read_input(input);
      auto sol = solve_three_points(io::point_from_json(j.at("p1")), io::point_from_json(j.at("p2")),
                                    io::point_from_json(j.at("p3")), branch);
      emit(json{{"map", io::to_json(sol.map)},
                {"epsilon", io::to_json(sol.epsilon)},
                {"branch", sol.branch}});
      return 0;
    }
    if (*classify) {
      json j = read_input(input);
      FixingClass c = classify_fixing(io::spgl21_from_json(j.at("map")),
                                      io::grassmann_from_json(j.at("eps")),
                                      io::grassmann_from_json(j.at("eps_prime")));
      std::string name = c == FixingClass::Identity  ? "identity"
                         : c == FixingClass::XiMinus ? "xi_minus"
                                                     : "not_fixing";
      emit(json{{"class", name}});
      return 0;
    }
    if (*pseudoinv) {
      json j = read_input(input);
      auto [plus, minus] = pseudoinvariant(io::point_from_json(j.at("p1")),
                                           io::point_from_json(j.at("p2")),
                                           io::point_from_json(j.at("p3")));
      emit(json{{"epsilon", io::to_json(plus)}, {"epsilon_neg", io::to_json(minus)}});
      return 0;
    }
    if (*normalize) {
      json j = read_input(input);
      NodalCurve c = io::curve_from_json(j.at("curve"));
      NormalizeResult res =
          normalize_vertex(c, vertex, {choice[0], choice[1], choice[2]}, branch);
      emit(json{{"curve", io::to_json(res.curve)},
                {"epsilon", io::to_json(res.epsilon)},
                {"branch", res.branch},
                {"applied", io::to_json(res.applied)}});
      return 0;
    }
    if (*equiv) {
      json j = read_input(input);
      auto witness = equivalent(io::curve_from_json(j.at("c1")), io::curve_from_json(j.at("c2")));
      if (!witness) {
        emit(json{{"equivalent", false}});
        return 1;
      }
      emit(json{{"equivalent", true},
                {"hom", witness->hom.vertex_map},
                {"reparam", io::to_json(witness->reparam)},
                {"xi_flip", witness->xi_flip}});
      return 0;
    }
    if (*dims) {
      SDim out;
      if (formula == "m0k")
        out = dim_M0k(dk);
      else if (formula == "m0t")
        out = dim_M0T(dk, dedges);
      else if (formula == "quotient")
        out = dim_quotient(SDim{da[0], da[1]}, SDim{db[0], db[1]});
      else if (formula == "groupoid")
        out = dim_groupoid(SDim{da[0], da[1]}, SDim{db[0], db[1]});
      else if (formula == "superj")
        out = dim_superJ(dn, dc1);
      else if (formula == "stablemaps")
        out = dim_stable_maps(dn, dc1, dk, dedges);
      else
        throw std::invalid_argument("dims: unknown formula " + formula);
      emit(io::to_json(out));
      return 0;
    }
    if (*enumerate) {
      auto trees = enumerate_stable(ek, emax);
      json arr = json::array();
      std::map<int, int> by_edges;
      for (const auto& t : trees) {
        arr.push_back(io::to_json(t));
        by_edges[static_cast<int>(t.edges.size())]++;
      }
      json counts = json::object();
      for (auto [e, c] : by_edges) counts[std::to_string(e)] = c;
      if (format == "text") {
        std::cout << "k=" << ek << ": " << trees.size() << " stable trees\n";
        for (auto [e, c] : by_edges)
          std::cout << "  edges=" << e << ": " << c << "\n";
      } else {
        emit(json{{"k", ek}, {"count", trees.size()}, {"counts_by_edges", counts}, {"trees", arr}});
      }
      return 0;
    }
    if (*stabilize_cmd) {
      json j = read_input(input);
      std::map<int, int> extra;
      if (j.contains("extra_special"))
        for (const auto& [key, v] : j.at("extra_special").items())
          extra[std::stoi(key)] = v.get<int>();
      LabeledTree t = stabilize(io::tree_from_json(j.at("tree")), extra);
      emit(json{{"tree", io::to_json(t)}, {"stable", is_stable(t)}});
      return 0;
    }
    if (*canon) {
      json j = read_input(input);
      LabeledTree t = io::tree_from_json(j.contains("tree") ? j.at("tree") : j);
      emit(json{{"canonical", canonical_form(t)}, {"stable", is_stable(t)}});
      return 0;
    }
    if (*partitions) {
      json j = read_input(input);
      auto parts = admissible_partitions(io::tree_from_json(j.at("tree")),
                                         j.at("degree").get<int>());
      json arr = json::array();
      for (const auto& p : parts) {
        json m = json::object();
        for (auto [v, d] : p) m[std::to_string(v)] = d;
        arr.push_back(m);
      }
      emit(json{{"count", parts.size()}, {"partitions", arr}});
      return 0;
    }
    if (*check_map) {
      json j = read_input(input);
      MapCheckReport r = check_stable_map(io::skeleton_from_json(j));
      emit(io::to_json(r));
      return r.pass ? 0 : 1;
    }
    if (*check_gromov) {
      json j = read_input(input);
      GromovOptions opts;
      opts.tolerance = (tol > 0) ? tol : cfg.convergence;
      opts.tail = (tail > 0) ? tail : cfg.tail;
      opts.grid_radius = cfg.grid_radius;
      if (j.contains("options")) {
        const json& o = j.at("options");
        if (o.contains("tolerance")) opts.tolerance = o.at("tolerance").get<double>();
        if (o.contains("tail")) opts.tail = o.at("tail").get<int>();
        if (o.contains("grid_radius")) opts.grid_radius = o.at("grid_radius").get<double>();
      }
      NodalCurve limit = io::curve_from_json(j.at("limit"));
      auto seq = io::sequence_from_json(j.at("sequence"));
      GromovReport r = check_gromov_curves(seq, limit, opts);
      if (format == "text")
        std::cout << io::report_text(r);
      else
        emit(io::to_json(r));
      return r.pass ? 0 : 1;
    }
    if (*geodesic) {
      MetricBundle bundle = make_metric(metric, dims_flag, cfg.s);
      SuperVector p(bundle.src.dims, coords_from_json(json::parse(p_json), cfg.s));
      SuperVector v(bundle.src.dims, coords_from_json(json::parse(v_json), cfg.s));
      GeodesicSolution sol = integrate_geodesic(bundle.src, p, v, T, step);
      if (format == "csv")
        std::cout << io::geodesic_csv(sol);
      else
        emit(io::to_json(sol));
      return 0;
    }
    if (*rank_form) {
      json j = read_input(input);
      RankResult r = standard_rank_form(io::matrix_from_json(j.at("matrix")));
      json out;
      if (r.has_rank()) {
        out["rank"] = io::to_json(SDim{r.rank->even, r.rank->odd});
        out["left_witness"] = io::to_json(*r.left_witness);
        out["right_witness"] = io::to_json(*r.right_witness);
      } else {
        out["rank"] = nullptr;
        out["blocked_at"] = {r.blocked_at->first, r.blocked_at->second};
      }
      emit(out);
      return 0;
    }
    if (*selftest) return run_selftest(format);
  } catch (const json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
