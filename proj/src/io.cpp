#include "logsparse/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "logsparse/error.hpp"

namespace logsparse::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(where) + ": missing \"" + key + "\"");
  return j.at(key);
}

std::size_t size_field(const Json& j, const char* key, const char* where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(std::string(where) + ": \"" + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

Rational rational_from_json(const Json& v, const char* where) {
  try {
    if (v.is_string()) {
      Rational q(v.get<std::string>());
      q.canonicalize();
      if (q.get_den() == 0) bad(std::string(where) + ": zero denominator");
      return q;
    }
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const std::invalid_argument&) {
  }
  bad(std::string(where) + ": expected an integer or a rational string, got " + v.dump());
}

bool exact_entry(const Json& v) { return v.is_string() || v.is_number_integer(); }

std::string rational_string(const Rational& q) { return q.get_str(); }

Json edges_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i + 1, j + 1});
  return edges;
}

Graph graph_from_json(const Json& j, std::vector<int>* edge_colours) {
  const std::size_t n = size_field(j, "n", "graph");
  if (n == 0) bad("graph: n must be positive");
  const Json& e = field(j, "edges", "graph");
  if (!e.is_array()) bad("graph: \"edges\" must be an array");
  std::vector<std::pair<Edge, int>> tagged;
  const bool coloured = j.contains("edge_colours");
  if (coloured && (!j["edge_colours"].is_array() || j["edge_colours"].size() != e.size()))
    bad("graph: \"edge_colours\" needs one entry per edge");
  for (std::size_t k = 0; k < e.size(); ++k) {
    const Json& p = e[k];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      bad("graph: every edge must be a pair of node numbers");
    long a = p[0].get<long>(), b = p[1].get<long>();
    if (a < 1 || b < 1 || a > static_cast<long>(n) || b > static_cast<long>(n))
      bad("graph: edge " + p.dump() + " is out of range (nodes are numbered 1.." + std::to_string(n) + ")");
    if (a > b) std::swap(a, b);
    const int colour = coloured ? j["edge_colours"][k].get<int>() : 0;
    tagged.push_back({{static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1)}, colour});
  }
  std::sort(tagged.begin(), tagged.end());
  std::vector<Edge> edges;
  for (const auto& [edge, colour] : tagged) {
    edges.push_back(edge);
    if (edge_colours) edge_colours->push_back(colour);
  }
  return Graph(n, std::move(edges));
}

Json sym_json(const RatSymMatrix& m) {
  Json up = Json::array();
  for (const auto& q : m.upper) up.push_back(rational_string(q));
  return {{"n", m.n}, {"upper", up}};
}

std::vector<std::string> string_list(const Json& v, const char* where) {
  if (!v.is_array()) bad(std::string(where) + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) bad(std::string(where) + ": expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

RatPoly polynomial_from_json(const Json& j, const std::vector<std::string>& vars) {
  if (j.is_string()) return parse_polynomial(j.get<std::string>(), vars);
  if (!j.is_object()) bad("polynomial: expected an object or a string");
  if (!j.contains("terms")) {
    if (j.contains("text") && j["text"].is_string()) return parse_polynomial(j["text"].get<std::string>(), vars);
    bad("polynomial: needs \"terms\" or \"text\"");
  }
  const std::vector<std::string> own = j.contains("vars") ? string_list(j["vars"], "polynomial vars") : vars;
  std::vector<std::size_t> map;
  for (const auto& name : own) {
    const auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) bad("polynomial: unknown variable " + name);
    map.push_back(static_cast<std::size_t>(it - vars.begin()));
  }
  const Json& terms = j["terms"];
  if (!terms.is_array()) bad("polynomial: \"terms\" must be an array");
  std::vector<RatPoly::Term> out;
  for (const auto& t : terms) {
    const Json& ex = field(t, "exps", "polynomial term");
    if (!ex.is_array() || ex.size() != own.size()) bad("polynomial term: \"exps\" needs one entry per variable");
    Monomial m;
    for (std::size_t i = 0; i < own.size(); ++i) {
      if (!ex[i].is_number_integer() || ex[i].get<long>() < 0 || ex[i].get<long>() > 255)
        bad("polynomial term: exponents must be integers in 0..255");
      m.e[map[i]] = static_cast<std::uint8_t>(m.e[map[i]] + ex[i].get<int>());
    }
    out.push_back({m, rational_from_json(field(t, "coeff", "polynomial term"), "polynomial coefficient")});
  }
  return RatPoly::from_terms(vars.size(), std::move(out));
}

Json generator_list(const std::vector<RatPoly>& gens, const std::vector<std::string>& vars) {
  Json a = Json::array();
  for (const auto& g : gens) a.push_back(to_json(g, vars));
  return a;
}

}  // namespace

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad(path + ": " + e.what());
  }
}

Json to_json(const SymMatrix& m) {
  Json up = Json::array();
  for (double v : m.upper()) up.push_back(v);
  return {{"n", m.size()}, {"upper", up}};
}

SymMatrix matrix_from_json(const Json& j) {
  if (j.is_object() && !j.contains("upper")) {
    if (j.contains("x_star")) return matrix_from_json(j["x_star"]);
    if (j.contains("matrix")) return matrix_from_json(j["matrix"]);
  }
  const std::size_t n = size_field(j, "n", "matrix");
  const Json& up = field(j, "upper", "matrix");
  if (!up.is_array() || up.size() != SymMatrix::packed_size(n))
    bad("matrix: \"upper\" needs n(n+1)/2 = " + std::to_string(SymMatrix::packed_size(n)) + " entries");
  SymMatrix m(n);
  for (std::size_t k = 0; k < up.size(); ++k) {
    if (!up[k].is_number()) bad("matrix: entries must be numbers");
    m.upper()[k] = up[k].get<double>();
    if (!std::isfinite(m.upper()[k])) bad("matrix: entries must be finite");
  }
  return m;
}

Json to_json(const Graph& g) { return {{"n", g.nodes()}, {"edges", edges_json(g)}}; }

Json to_json(const ColouredGraph& cg) {
  Json j = to_json(cg.graph());
  j["vertex_colours"] = cg.vertex_colours();
  j["edge_colours"] = cg.edge_colours();
  return j;
}

Lssm lssm_from_json(const Json& j) {
  if (!j.is_object()) bad("space: expected a JSON object");
  if (j.contains("graph")) return lssm_from_json(j["graph"]);
  if (j.contains("edges")) {
    const bool coloured = j.contains("vertex_colours") || j.contains("edge_colours");
    std::vector<int> ec;
    Graph g = graph_from_json(j, &ec);
    if (!coloured) return Lssm::from_graph(g);
    std::vector<int> vc(g.nodes(), 0);
    if (j.contains("vertex_colours")) {
      const Json& v = j["vertex_colours"];
      if (!v.is_array() || v.size() != g.nodes()) bad("graph: \"vertex_colours\" needs one entry per node");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) bad("graph: colours must be integers");
        vc[i] = v[i].get<int>();
      }
    } else {
      std::iota(vc.begin(), vc.end(), 0);
    }
    if (!j.contains("edge_colours")) std::iota(ec.begin(), ec.end(), 0);
    return Lssm::from_coloured(ColouredGraph(std::move(g), std::move(vc), std::move(ec)));
  }
  const Json& basis = field(j, "basis", "space");
  if (!basis.is_array() || basis.empty()) bad("space: \"basis\" must be a non-empty array of matrices");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = string_list(j["labels"], "space labels");
  bool exact = true;
  for (const auto& b : basis)
    if (b.is_object() && b.contains("upper") && b["upper"].is_array())
      for (const auto& v : b["upper"]) exact = exact && exact_entry(v);
  if (exact) {
    std::vector<RatSymMatrix> mats;
    for (const auto& b : basis) {
      const std::size_t n = size_field(b, "n", "basis matrix");
      const Json& up = field(b, "upper", "basis matrix");
      if (up.size() != SymMatrix::packed_size(n)) bad("basis matrix: \"upper\" needs n(n+1)/2 entries");
      RatSymMatrix m(n);
      for (std::size_t k = 0; k < up.size(); ++k) m.upper[k] = rational_from_json(up[k], "basis entry");
      mats.push_back(std::move(m));
    }
    return Lssm::from_rational_basis(std::move(mats), std::move(labels));
  }
  std::vector<SymMatrix> mats;
  for (const auto& b : basis) mats.push_back(matrix_from_json(b));
  return Lssm::from_basis(std::move(mats), std::move(labels));
}

Json to_json(const Lssm& l) {
  static const char* kinds[] = {"generic", "graph", "coloured"};
  Json j;
  j["format_version"] = kFormatVersion;
  j["n"] = l.size();
  j["dim"] = l.dim();
  j["kind"] = kinds[static_cast<int>(l.kind())];
  j["contains_identity"] = l.contains_identity();
  if (l.coloured()) j["graph"] = to_json(*l.coloured());
  else if (l.graph()) j["graph"] = to_json(*l.graph());
  j["labels"] = l.labels();
  Json basis = Json::array();
  if (l.is_rational())
    for (const auto& b : l.exact_basis()) basis.push_back(sym_json(b));
  else
    for (const auto& b : l.basis()) basis.push_back(to_json(b));
  j["basis"] = basis;
  return j;
}

Json to_json(const RatPoly& p, const std::vector<std::string>& vars) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    std::vector<int> ex(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) ex[i] = t.mono.e[i];
    terms.push_back({{"coeff", rational_string(t.coeff)}, {"exps", ex}});
  }
  return {{"vars", vars}, {"terms", terms}, {"text", p.to_string(vars)}};
}

std::vector<RatPoly> polynomials_from_json(const Json& j, const std::vector<std::string>& vars) {
  std::vector<RatPoly> out;
  if (j.is_array()) {
    for (const auto& p : j) out.push_back(polynomial_from_json(p, vars));
    return out;
  }
  for (const char* key : {"generators", "polynomials"})
    if (j.is_object() && j.contains(key)) return polynomials_from_json(j[key], vars);
  out.push_back(polynomial_from_json(j, vars));
  return out;
}

Json to_json(const DimensionReport& r) {
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back({{"name", b.name}, {"value", b.value}});
  Json j = {{"n", r.n}, {"d", r.d},           {"m", r.m},           {"k", r.k},
            {"gv_dim", r.gv_dim}, {"ambient", r.ambient}, {"bounds", bounds}, {"semialgebraic", r.semialgebraic}};
  j["conjecture_value"] = r.conjecture_value ? Json(*r.conjecture_value) : Json(nullptr);
  j["relations"] = r.relations;
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const VerifyReport& r) {
  Json perms = Json::array();
  for (const auto& p : r.symmetries_used) {
    std::vector<std::size_t> one_based(p.size());
    std::transform(p.begin(), p.end(), one_based.begin(), [](std::size_t v) { return v + 1; });
    perms.push_back(one_based);
  }
  return {{"passed", r.passed},
          {"max_residual", r.max_residual},
          {"residuals", r.residuals},
          {"samples", r.samples},
          {"symmetries_used", perms},
          {"symmetry_max_residual", r.symmetry_max_residual},
          {"failures", r.failures}};
}

Json to_json(const GbStats& s) {
  return {{"pairs_considered", s.pairs_considered}, {"pairs_reduced", s.pairs_reduced},
          {"zero_reductions", s.zero_reductions},   {"basis_size", s.basis_size},
          {"max_degree_seen", s.max_degree_seen},   {"seconds", s.seconds}};
}

Json to_json(const RationalEquationSet& r) {
  Json per = Json::array();
  for (const auto& d : r.per_degree)
    per.push_back({{"degree", d.degree},
                   {"basis_size", d.basis_size},
                   {"samples", d.samples},
                   {"kernel_dim", d.kernel_dim},
                   {"deflated", d.deflated},
                   {"found", d.found},
                   {"sigma_max", d.sigma_max},
                   {"sigma_kept_min", d.sigma_kept_min},
                   {"sigma_discarded_max", d.sigma_discarded_max},
                   {"seconds", d.seconds}});
  return {{"format_version", kFormatVersion},
          {"method", "numeric"},
          {"vars", r.vars},
          {"generators", generator_list(r.polynomials, r.vars)},
          {"degrees", r.degrees},
          {"term_counts", r.term_counts},
          {"homogeneous_basis", r.homogeneous_basis},
          {"per_degree", per},
          {"verification", to_json(r.verification)},
          {"warnings", r.warnings}};
}

Json to_json(const Algorithm2Result& r) {
  return {{"format_version", kFormatVersion},
          {"method", "symbolic"},
          {"vars", r.vars},
          {"generators", generator_list(r.generators, r.vars)},
          {"groebner", to_json(r.stats)},
          {"verification", to_json(r.verification)}};
}

Json to_json(const EntropicSolution& s) {
  return {{"format_version", kFormatVersion},
          {"y", s.y},
          {"x_star", to_json(s.x_star)},
          {"residual", s.residual},
          {"entropy", s.entropy},
          {"iterations", s.iterations},
          {"residual_history", s.residual_history},
          {"warnings", s.warnings}};
}

std::vector<double> vector_from_json(const Json& j, const char* key) {
  const Json& a = j.is_object() && j.contains(key) ? j[key] : j;
  if (!a.is_array()) bad(std::string("expected an array of numbers or an object with \"") + key + "\"");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) bad("expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace logsparse::io
