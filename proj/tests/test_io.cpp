#include <gtest/gtest.h>

#include <functional>

#include "logsparse/error.hpp"
#include "logsparse/io.hpp"
#include "test_support.hpp"

using namespace logsparse;
using io::Json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::VerificationFailed;
}

}  // namespace

TEST(IoMatrix, RoundTrip) {
  std::mt19937_64 rng(41);
  const SymMatrix m = logsparse::testing::random_symmetric(4, rng);
  const SymMatrix back = io::matrix_from_json(Json::parse(io::to_json(m).dump()));
  EXPECT_EQ(logsparse::testing::max_abs_diff(m, back), 0.0);
  // Solutions carry their matrix under x_star.
  EXPECT_EQ(io::matrix_from_json(Json{{"x_star", io::to_json(m)}}).size(), 4u);
}

TEST(IoMatrix, RejectsMalformed) {
  EXPECT_EQ(kind_of([] { io::matrix_from_json(Json::parse(R"({"n": 2, "upper": [1, 2]})")); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { io::matrix_from_json(Json::parse(R"({"upper": [1]})")); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { io::matrix_from_json(Json::parse(R"({"n": 1, "upper": ["a"]})")); }), ErrorKind::InvalidInput);
}

TEST(IoGraph, OneBasedEdges) {
  const Lssm l = io::lssm_from_json(Json::parse(R"({"n": 4, "edges": [[2, 1], [3, 2], [4, 3]]})"));
  ASSERT_TRUE(l.graph());
  EXPECT_EQ(l.graph()->edges(), (std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_EQ(io::to_json(*l.graph())["edges"], Json::parse("[[1, 2], [2, 3], [3, 4]]"));
  EXPECT_EQ(kind_of([] { io::lssm_from_json(Json::parse(R"({"n": 3, "edges": [[0, 1]]})")); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { io::lssm_from_json(Json::parse(R"({"n": 3, "edges": [[1, 4]]})")); }), ErrorKind::InvalidInput);
}

TEST(IoGraph, EdgeColoursFollowTheirEdges) {
  // Listed out of order: the colours must stay attached to their edges.
  const Lssm l = io::lssm_from_json(
      Json::parse(R"({"n": 3, "edges": [[2, 3], [1, 2]], "vertex_colours": [5, 5, 5], "edge_colours": [7, 9]})"));
  ASSERT_TRUE(l.coloured());
  const auto& cg = *l.coloured();
  EXPECT_EQ(cg.graph().edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_NE(cg.edge_colours()[0], cg.edge_colours()[1]);
  EXPECT_EQ(l.dim(), 3u);
}

TEST(IoSpace, RationalBasisAndRoundTrip) {
  const Lssm l = io::lssm_from_json(Json::parse(
      R"({"n": 2, "basis": [{"n": 2, "upper": ["1/2", 0, 1]}, {"n": 2, "upper": [0, 1, 0]}], "labels": ["a", "b"]})"));
  EXPECT_TRUE(l.is_rational());
  EXPECT_EQ(l.exact_basis()[0].upper[0], Rational(1, 2));
  const Lssm back = io::lssm_from_json(Json::parse(io::to_json(l).dump()));
  EXPECT_EQ(back.dim(), 2u);
  EXPECT_EQ(back.exact_basis()[0].upper, l.exact_basis()[0].upper);
  EXPECT_EQ(back.labels(), l.labels());

  const Lssm g = Lssm::from_coloured(ColouredGraph(Graph::path(3), {0, 1, 0}, {0, 0}));
  const Lssm gb = io::lssm_from_json(Json::parse(io::to_json(g).dump()));
  EXPECT_EQ(gb.kind(), PatternKind::Coloured);
  EXPECT_EQ(gb.dim(), g.dim());
}

TEST(IoPolynomial, RoundTripAndRenaming) {
  const auto vars = matrix_variable_names(3);
  const RatPoly p = parse_polynomial("3*x11^2*x23 - 1/2*x12 + 7", vars);
  const Json j = io::to_json(p, vars);
  EXPECT_EQ(j["terms"][0]["coeff"], "3");
  EXPECT_EQ(io::polynomials_from_json(Json::parse(j.dump()), vars).at(0), p);
  // Variables in another order are matched by name.
  const Json other = Json::parse(R"({"vars": ["x23", "x11"], "terms": [{"coeff": "-2", "exps": [1, 1]}]})");
  EXPECT_EQ(io::polynomials_from_json(other, vars).at(0), parse_polynomial("-2*x11*x23", vars));
  const Json list = {{"generators", Json::array({j, Json{{"text", "x12 - x13"}}})}};
  EXPECT_EQ(io::polynomials_from_json(list, vars).size(), 2u);
  EXPECT_EQ(kind_of([&] { io::polynomials_from_json(Json::parse(R"({"vars": ["y"], "terms": []})"), vars); }),
            ErrorKind::InvalidInput);
}
