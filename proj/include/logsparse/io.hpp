#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "logsparse/entsdp.hpp"
#include "logsparse/lssm.hpp"
#include "logsparse/numimpl.hpp"
#include "logsparse/pattern.hpp"
#include "logsparse/polynomial.hpp"
#include "logsparse/symimpl.hpp"
#include "logsparse/symmat.hpp"

namespace logsparse::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Parses a file; InvalidInput when it is missing or not JSON.
Json read_file(const std::string& path);

/// {"n": n, "upper": [...]} with the upper triangle row by row.
Json to_json(const SymMatrix& m);
/// Also accepts an object carrying the matrix under "x_star" or "matrix".
SymMatrix matrix_from_json(const Json& j);

/// Nodes are 1-based in files.
Json to_json(const Graph& g);
Json to_json(const ColouredGraph& cg);

/// A graph file ({"n", "edges", optional "vertex_colours", "edge_colours"}),
/// or a space file ({"n", "basis": [matrices]}), or an LSSM document as
/// written by to_json(Lssm), whose "graph" entry wins over its basis.
Lssm lssm_from_json(const Json& j);
Json to_json(const Lssm& l);

/// {"vars": [...], "terms": [{"coeff": "3" or "-1/2", "exps": [...]}], "text": ...}
Json to_json(const RatPoly& p, const std::vector<std::string>& vars);

/// Polynomials over the names `vars` (normally matrix_variable_names(n)).
/// Accepts one polynomial object, an array of them, or an object with a
/// "generators" or "polynomials" array. A polynomial object may give "terms"
/// with its own "vars" (matched by name) or only "text".
std::vector<RatPoly> polynomials_from_json(const Json& j, const std::vector<std::string>& vars);

Json to_json(const DimensionReport& r);
Json to_json(const VerifyReport& r);
Json to_json(const GbStats& s);
Json to_json(const RationalEquationSet& r);
Json to_json(const Algorithm2Result& r);
Json to_json(const EntropicSolution& s);

/// Right-hand side: a plain array or an object with "b".
std::vector<double> vector_from_json(const Json& j, const char* key = "b");

}  // namespace logsparse::io
