#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "logsparse/error.hpp"
#include "logsparse/symimpl.hpp"
#include "test_support.hpp"

using namespace logsparse;
using logsparse::testing::random_symmetric;

namespace {

Lssm chain3(std::vector<int> vc, std::vector<int> ec) {
  return Lssm::from_coloured(ColouredGraph(Graph::path(3), std::move(vc), std::move(ec)));
}

Lssm shifted_units() {
  std::vector<SymMatrix> b;
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    SymMatrix a = SymMatrix::identity(3);
    a.at(i, j) = 1.0;
    b.push_back(a);
  }
  return Lssm::from_basis(b);
}

std::vector<std::string> vars(std::size_t n) { return matrix_variable_names(n); }

// Reduced grevlex basis with positive leading coefficients, as strings.
std::vector<std::string> canonical(const std::vector<RatPoly>& polys, std::size_t n) {
  std::vector<std::string> out;
  if (polys.empty()) return out;
  const auto names = vars(n);
  for (const auto& g : buchberger(polys, MonomialOrder::grevlex(SymMatrix::packed_size(n)))) out.push_back(g.to_string(names));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> canonical_text(const std::vector<std::string>& text, std::size_t n) {
  std::vector<RatPoly> polys;
  for (const auto& t : text) polys.push_back(parse_polynomial(t, vars(n)));
  return canonical(polys, n);
}

SymMatrix random_pd(std::size_t n, std::mt19937_64& rng) { return expm(random_symmetric(n, rng)); }

double scaled_value(const RatPoly& f, std::span<const double> pt) {
  double mag = 0.0;
  for (const auto& t : f.terms()) {
    double v = std::abs(t.coeff.get_d());
    for (std::size_t i = 0; i < pt.size(); ++i) v *= std::pow(std::abs(pt[i]), t.mono.e[i]);
    mag += v;
  }
  return std::abs(f.evaluate(pt)) / std::max(mag, 1e-300);
}

bool refused(const Lssm& l) {
  try {
    run_algorithm2(l);
  } catch (const Error& e) {
    return e.kind() == ErrorKind::QDependentEigenvalues;
  }
  return false;
}

}  // namespace

TEST(Sylvester, TwoByTwoOffDiagonal) {
  const auto par = sylvester_parametrization(2);
  const auto& names = par.ring.vars.names();
  EXPECT_EQ(par.entries[SymMatrix::packed_index(2, 0, 1)], parse_polynomial("log1*x12 - log2*x12", names));
  EXPECT_EQ(par.denominator, parse_polynomial("lam1 - lam2", names));
  EXPECT_EQ(par.entries[0], parse_polynomial("log1*x11 - log1*lam2 - log2*x11 + log2*lam1", names));
}

TEST(Sylvester, MatchesMatrixLogarithm) {
  std::mt19937_64 rng(21);
  for (std::size_t n : {2u, 3u}) {
    const auto par = sylvester_parametrization(n);
    for (int k = 0; k < 20; ++k) {
      const SymMatrix x = random_pd(n, rng);
      const auto pt = symbolic_point(par.ring, x);
      const SymMatrix g = logm(x);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) EXPECT_NEAR(par.log_entry(i, j, pt), g(i, j), 1e-8);
    }
  }
}

TEST(Charpoly, SmallCases) {
  const SymbolicRing r1(1);
  const auto c1 = charpoly_relations(r1);
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_EQ(c1[0], parse_polynomial("lam1 - x11", r1.vars.names()));

  const SymbolicRing r2(2);
  const auto c2 = charpoly_relations(r2);
  ASSERT_EQ(c2.size(), 2u);
  EXPECT_EQ(c2[0], parse_polynomial("lam1 + lam2 - x11 - x22", r2.vars.names()));
  EXPECT_EQ(c2[1], parse_polynomial("lam1*lam2 - x11*x22 + x12^2", r2.vars.names()));
}

TEST(Charpoly, VanishesAtEigenvalues) {
  std::mt19937_64 rng(22);
  for (std::size_t n : {2u, 3u}) {
    const SymbolicRing r(n);
    const auto rel = charpoly_relations(r);
    for (int k = 0; k < 20; ++k) {
      const auto pt = symbolic_point(r, random_pd(n, rng));
      for (const auto& f : rel) EXPECT_LE(scaled_value(f, pt), 1e-8);
    }
  }
}

TEST(Algorithm2, ShiftedUnitsCubic) {
  const auto r = run_algorithm2(shifted_units());
  ASSERT_EQ(r.generators.size(), 1u);
  const std::string cubic =
      "(x11-x22)*(x11-x33)*(x22-x33) - x33*(x13^2-x23^2) - x22*(x23^2-x12^2) - x11*(x12^2-x13^2)";
  EXPECT_EQ(canonical(r.generators, 3), canonical_text({cubic}, 3));
  EXPECT_TRUE(r.verification.passed);
}

TEST(Algorithm2, UncolouredChainIsAmbient) {
  const auto r = run_algorithm2(Lssm::from_graph(Graph::path(3)));
  EXPECT_TRUE(r.generators.empty());
  EXPECT_TRUE(r.minors.empty());
}

TEST(Algorithm2, ColouredChainWithEqualEnds) {
  const auto r = run_algorithm2(chain3({0, 1, 0}, {0, 0}));
  EXPECT_EQ(canonical(r.generators, 3), canonical_text({"x12 - x23", "x11 - x33"}, 3));
}

TEST(Algorithm2, AgreesWithNumericImplicitization) {
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> cases = {
      {{0, 1, 2}, {0, 1}}, {{0, 1, 2}, {0, 0}}, {{0, 0, 1}, {0, 1}}, {{0, 0, 1}, {0, 0}}, {{0, 1, 0}, {0, 1}}};
  for (const auto& [vc, ec] : cases) {
    const Lssm l = chain3(vc, ec);
    const auto sym = run_algorithm2(l);
    const auto num = run_algorithm1(l, 3);
    EXPECT_EQ(canonical(sym.generators, 3), canonical(num.polynomials, 3));
  }
}

TEST(Algorithm2, RefusesDependentEigenvalues) {
  EXPECT_TRUE(refused(chain3({0, 0, 0}, {0, 1})));
  EXPECT_TRUE(refused(chain3({0, 0, 0}, {0, 0})));
  EXPECT_TRUE(refused(Lssm::from_basis({SymMatrix::identity(2)})));
}

Lssm diagonal_space(std::size_t n) {
  std::vector<SymMatrix> b;
  for (std::size_t i = 0; i < n; ++i) {
    SymMatrix e(n);
    e.at(i, i) = 1.0;
    b.push_back(e);
  }
  return Lssm::from_basis(b);
}

TEST(Algorithm2, DiagonalSpaces) {
  // A commuting space: the kernel of C(X) is all of span(id, X, X^2).
  EXPECT_EQ(canonical(run_algorithm2(diagonal_space(2)).generators, 2), canonical_text({"x12"}, 2));
  EXPECT_EQ(canonical(run_algorithm2(diagonal_space(3)).generators, 3), canonical_text({"x12", "x13", "x23"}, 3));
}

TEST(Algorithm2, RefusesDisconnectedGraphs) {
  try {
    run_algorithm2(Lssm::from_graph(Graph(3, {{0, 1}})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Disconnected);
  }
}

TEST(Algorithm2, SylvesterMethodAgreesAtSizeTwo) {
  SymMatrix e11(2), e12(2);
  e11.at(0, 0) = 1.0;
  e12.at(0, 1) = 1.0;
  const std::vector<Lssm> cases = {
      diagonal_space(2),
      Lssm::from_graph(Graph::complete(2)),
      Lssm::from_coloured(ColouredGraph(Graph::path(2), {0, 0}, {0})),
      Lssm::from_basis({e11, e12}),
  };
  Algorithm2Options slow;
  slow.method = Algorithm2Method::Sylvester;
  for (const auto& l : cases) {
    const auto a = run_algorithm2(l);
    const auto b = run_algorithm2(l, slow);
    EXPECT_EQ(canonical(a.generators, 2), canonical(b.generators, 2));
  }
  EXPECT_EQ(canonical(run_algorithm2(cases[2], slow).generators, 2), canonical_text({"x11 - x22"}, 2));
}

TEST(Algorithm2, IdealsBeforeSaturationVanishOnGibbsPoints) {
  const Lssm l = shifted_units();
  const auto r = run_algorithm2(l);
  const SymbolicRing ring(3);
  ASSERT_FALSE(r.input.empty());
  ASSERT_FALSE(r.minors.empty());
  for (std::uint64_t s = 0; s < 20; ++s) {
    const SymMatrix x = expm(sample(l, 31, s).matrix);
    const auto pt = symbolic_point(ring, x);
    for (const auto& f : r.input) EXPECT_LE(scaled_value(f, pt), 1e-9);
    for (const auto& f : r.minors) EXPECT_LE(scaled_value(f, x.upper()), 1e-9);
    for (const auto& f : r.generators) EXPECT_LE(scaled_value(f, x.upper()), 1e-9);
    // The saturating factor must be nonzero on GM, or points would be lost.
    EXPECT_GT(scaled_value(r.saturating, x.upper()), 1e-12);
  }
}

TEST(CentralizerMinors, TreesOnFourNodesGiveOneSextic) {
  for (const Graph& g : {Graph::path(4), Graph::star(4)}) {
    const Lssm l = Lssm::from_graph(g);
    const auto m = centralizer_minors(l);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].degree(), 6);
    EXPECT_TRUE(m[0].is_homogeneous());
    VerifyOptions vo;
    vo.samples = 50;
    EXPECT_TRUE(verify(m, l, vo).passed);
  }
  EXPECT_EQ(centralizer_minors(Lssm::from_graph(Graph::star(4)))[0].term_count(), 60u);
}
