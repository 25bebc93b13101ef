#include <gtest/gtest.h>

#include <random>

#include "logsparse/error.hpp"
#include "logsparse/lssm.hpp"
#include "logsparse/pattern.hpp"
#include "logsparse/rational.hpp"

using namespace logsparse;

namespace {

// 1-based edge list, as written in graph files.
Graph graph1(std::size_t n, std::vector<Edge> edges) {
  for (auto& [i, j] : edges) {
    --i;
    --j;
  }
  return Graph(n, std::move(edges));
}

// Exact containment of span(a) in span(b): rank does not grow.
bool span_contains(const std::vector<SymMatrix>& b, const std::vector<SymMatrix>& a) {
  RatRows rows;
  for (const auto& m : b) rows.push_back(RatSymMatrix::from_double(m).upper);
  const std::size_t r = exact_rank(rows);
  for (const auto& m : a) rows.push_back(RatSymMatrix::from_double(m).upper);
  return exact_rank(rows) == r;
}

}  // namespace

TEST(Graph, RejectsMalformed) {
  EXPECT_THROW(Graph(3, {{0, 0}}), Error);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), Error);
  EXPECT_THROW(Graph(3, {{0, 3}}), Error);
}

TEST(Graph, Connectivity) {
  EXPECT_TRUE(Graph::path(4).is_connected());
  EXPECT_FALSE(Graph(4, {{0, 1}, {2, 3}}).is_connected());
  EXPECT_TRUE(Graph(1, {}).is_connected());
  EXPECT_NO_THROW(validate_connected(Graph::path(4)));
  try {
    validate_connected(Graph(4, {{0, 1}, {2, 3}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Disconnected);
    EXPECT_NE(std::string(e.what()).find("block-diagonal"), std::string::npos);
  }
}

TEST(SparsitySet, CompleteGraphIsEmpty) { EXPECT_TRUE(sparsity_set(Graph::complete(4)).pairs.empty()); }

TEST(SparsitySet, FourNodeExample) {
  const auto s = sparsity_set(graph1(4, {{1, 4}, {2, 3}, {3, 4}}));
  EXPECT_EQ(s.pairs, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}}));
}

TEST(SparsitySet, Edgeless) {
  EXPECT_EQ(sparsity_set(Graph(3, {})).pairs, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(SparsitySet, CountsComplementEdges) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng() % 5;
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng() % 2) e.emplace_back(i, j);
    const Graph g(n, e);
    EXPECT_EQ(sparsity_set(g).pairs.size() + g.edge_count(), n * (n - 1) / 2);
  }
}

TEST(LssmBasis, ZerosOnSparsitySet) {
  const Graph g = graph1(4, {{1, 4}, {2, 3}, {3, 4}});
  const auto b = lssm_basis(g);
  ASSERT_EQ(b.basis.size(), 4u + 3u);
  SymMatrix generic(4);
  for (std::size_t k = 0; k < b.basis.size(); ++k) generic += static_cast<double>(k + 1) * b.basis[k];
  for (auto [i, j] : sparsity_set(g).pairs) EXPECT_EQ(generic(i, j), 0.0);
  for (auto [i, j] : g.edges()) EXPECT_NE(generic(i, j), 0.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NE(generic(i, i), 0.0);
}

TEST(LssmBasis, CompleteGraphSpansEverything) {
  const auto b = lssm_basis(Graph::complete(4));
  EXPECT_EQ(b.basis.size(), 10u);
  const Lssm l = Lssm::from_basis(b.basis);
  EXPECT_TRUE(l.constraints().empty());
}

TEST(LssmBasis, ChainIsTridiagonal) {
  const auto b = lssm_basis(Graph::path(4));
  EXPECT_EQ(b.basis.size(), 7u);
  SymMatrix sum(4);
  for (const auto& m : b.basis) sum += m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) EXPECT_EQ(sum(i, j) != 0.0, j - i <= 1);
  EXPECT_EQ(b.labels[4], "y12");
}

TEST(ColouredBasis, SameDiagonalColourTwoEdgeColours) {
  const ColouredGraph cg(Graph::path(3), {1, 1, 1}, {2, 5});
  const auto b = coloured_lssm_basis(cg);
  ASSERT_EQ(b.basis.size(), 3u);
  EXPECT_EQ(b.basis[0], SymMatrix::identity(3));
  EXPECT_EQ(b.basis[1](0, 1), 0.5);
  EXPECT_EQ(b.basis[1](1, 2), 0.0);
  EXPECT_EQ(b.basis[2](1, 2), 0.5);
}

TEST(ColouredBasis, SingleEdgeColour) {
  const ColouredGraph cg(Graph::path(3), {4, 4, 4}, {9, 9});
  const auto b = coloured_lssm_basis(cg);
  ASSERT_EQ(b.basis.size(), 2u);
  EXPECT_EQ(b.basis[1](0, 1), 0.5);
  EXPECT_EQ(b.basis[1](1, 2), 0.5);
  EXPECT_EQ(cg.vertex_colour_count(), 1u);
}

TEST(ColouredBasis, DistinctColoursMatchUncoloured) {
  const Graph g = graph1(4, {{1, 2}, {2, 3}, {2, 4}});
  const ColouredGraph cg(g, {1, 2, 3, 4}, {1, 2, 3});
  const auto a = coloured_lssm_basis(cg);
  const auto b = lssm_basis(g);
  ASSERT_EQ(a.basis.size(), b.basis.size());
  EXPECT_TRUE(span_contains(b.basis, a.basis));
  EXPECT_TRUE(span_contains(a.basis, b.basis));
}

TEST(ColouredBasis, ContainedInUncolouredSpan) {
  const Graph g = Graph::path(4);
  const ColouredGraph cg(g, {1, 2, 2, 1}, {1, 2, 1});
  const auto b = lssm_basis(g);
  EXPECT_TRUE(span_contains(b.basis, coloured_lssm_basis(cg).basis));
  for (const auto& m : coloured_lssm_basis(cg).basis) EXPECT_LE(distance_to_span(m, b.basis), 1e-15);
  EXPECT_EQ(coloured_lssm_basis(cg).basis.size(), 4u);
}

TEST(Membership, DiagonalAlwaysAllowed) {
  const double d[] = {1, 2, 3};
  EXPECT_TRUE(pattern_membership(SymMatrix::diagonal(d), lssm_basis(Graph(3, {})), 1e-12));
  EXPECT_TRUE(pattern_membership(SymMatrix::diagonal(d), lssm_basis(Graph::path(3)), 1e-12));
}

TEST(Membership, ForbiddenEntry) {
  SymMatrix m(2);
  m.at(0, 1) = 1.0;
  EXPECT_FALSE(pattern_membership(m, lssm_basis(Graph(2, {})), 1e-9));
}

TEST(Membership, LogOfChainSample) {
  const Lssm l = Lssm::from_graph(Graph::path(4));
  const auto pb = lssm_basis(Graph::path(4));
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto s = sample(l, 17, i);
    EXPECT_TRUE(pattern_membership(logm(expm(s.matrix)), pb, 1e-9));
    EXPECT_FALSE(pattern_membership(expm(s.matrix), pb, 1e-9));
  }
}

TEST(Automorphisms, PathAndStar) {
  EXPECT_EQ(automorphisms(Graph::path(4)).size(), 2u);
  EXPECT_EQ(automorphisms(Graph::star(4)).size(), 6u);
  EXPECT_EQ(automorphisms(Graph::complete(4)).size(), 24u);
  const ColouredGraph cg(Graph::path(3), {1, 1, 1}, {1, 2});
  EXPECT_EQ(automorphisms(cg).size(), 1u);
}

TEST(Permute, MovesEntries) {
  SymMatrix m(3);
  m.at(0, 2) = 7.0;
  m.at(0, 0) = 1.0;
  const SymMatrix p = permute(m, {1, 0, 2});
  EXPECT_EQ(p(1, 2), 7.0);
  EXPECT_EQ(p(1, 1), 1.0);
}
