#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "logsparse/error.hpp"
#include "logsparse/numimpl.hpp"

using namespace logsparse;

namespace {

Lssm chain3(std::vector<int> vc, std::vector<int> ec) {
  return Lssm::from_coloured(ColouredGraph(Graph::path(3), std::move(vc), std::move(ec)));
}

// Span of id + E_ij for the three off-diagonal positions of a 3x3 matrix.
Lssm shifted_units() {
  std::vector<SymMatrix> b;
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    SymMatrix a = SymMatrix::identity(3);
    a.at(i, j) = 1.0;
    b.push_back(a);
  }
  return Lssm::from_basis(b);
}

const std::vector<std::string>& vars3() {
  static const auto v = matrix_variable_names(3);
  return v;
}

RatPoly shifted_units_cubic() {
  return parse_polynomial(
      "(x11-x22)*(x11-x33)*(x22-x33) - x33*(x13^2-x23^2) - x22*(x23^2-x12^2) - x11*(x12^2-x13^2)", vars3());
}

bool same_up_to_sign(const RatPoly& a, const RatPoly& b) {
  return a.primitive() == b.primitive() || a.primitive() == (-b).primitive();
}

std::set<std::string> as_strings(const RationalEquationSet& r) {
  std::set<std::string> out;
  for (const auto& p : r.polynomials) out.insert(p.to_string(r.vars));
  return out;
}

}  // namespace

TEST(MonomialBasis, Counts) {
  EXPECT_EQ(MonomialBasis(6, 3, true).size(), 56u);
  EXPECT_EQ(MonomialBasis(6, 3, false).size(), 84u);
  EXPECT_EQ(MonomialBasis(10, 6, true).size(), 5005u);
  EXPECT_EQ(MonomialBasis(3, 0, true).size(), 1u);
}

TEST(MonomialBasis, OrderAndLookup) {
  const MonomialBasis b(3, 2, false);
  const auto& m = b.monomials();
  ASSERT_EQ(m.size(), 10u);
  EXPECT_EQ(m[0].degree(), 0u);
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LE(m[i - 1].degree(), m[i].degree());
  // x1^2 opens degree 2.
  EXPECT_EQ(m[4].e[0], 2);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(b.index_of(m[i]), i);
  Monomial cube;
  cube.e[0] = 3;
  EXPECT_EQ(b.index_of(cube), b.size());
}

TEST(Vandermonde, IdentityRow) {
  const MonomialBasis b(3, 1, true);
  const auto v = vandermonde({SymMatrix::identity(2)}, b);
  ASSERT_EQ(v.rows, 1u);
  ASSERT_EQ(v.cols, 3u);
  const double expected[] = {1.0, 0.0, 1.0};
  for (std::size_t c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(v(0, c) * v.column_norms[c], expected[c]);
}

TEST(Vandermonde, IdenticalSamplesGiveIdenticalRows) {
  const Lssm l = Lssm::from_graph(Graph::path(3));
  const SymMatrix p = expm(sample(l, 5, 0).matrix);
  const auto v = vandermonde({p, p, expm(sample(l, 5, 1).matrix)}, MonomialBasis(6, 3, false));
  for (std::size_t c = 0; c < v.cols; ++c) EXPECT_EQ(v(0, c), v(1, c));
}

TEST(Vandermonde, MatchesDirectEvaluation) {
  const Lssm l = Lssm::from_graph(Graph::complete(3));
  const MonomialBasis b(6, 4, false);
  std::vector<SymMatrix> pts;
  for (std::uint64_t s = 0; s < 70; ++s) pts.push_back(expm(sample(l, 9, s).matrix));
  const auto v = vandermonde(pts, b);
  for (std::size_t r = 0; r < pts.size(); r += 7)
    for (std::size_t c = 0; c < b.size(); c += 5) {
      double want = 1.0;
      for (std::size_t k = 0; k < 6; ++k) want *= std::pow(pts[r].upper()[k], b.monomials()[c].e[k]);
      EXPECT_NEAR(v(r, c) * v.column_norms[c], want, 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST(Vandermonde, RankAgreesAcrossSampleBatches) {
  const Lssm l = shifted_units();
  const MonomialBasis b(6, 3, false);
  std::vector<std::vector<Integer>> spans[2];
  for (int batch = 0; batch < 2; ++batch) {
    std::vector<SymMatrix> pts;
    for (std::uint64_t s = 0; s < 110; ++s) pts.push_back(expm(sample(l, 100 + batch, s).matrix));
    const auto kb = kernel(vandermonde(pts, b));
    EXPECT_EQ(kb.vectors.size(), 1u);
    spans[batch] = rationalize_span(kb.vectors, b, 1'000'000, kb.column_scale);
  }
  EXPECT_EQ(spans[0], spans[1]);
}

TEST(Kernel, FullRankIsEmpty) {
  Matrix a(5, 3);
  for (std::size_t i = 0; i < 3; ++i) a(i, i) = 1.0;
  a(4, 0) = 0.5;
  const auto kb = kernel(a);
  EXPECT_TRUE(kb.vectors.empty());
  EXPECT_EQ(kb.singular_values.size(), 3u);
}

TEST(Kernel, DuplicatedColumn) {
  Matrix a(4, 3);
  const double col[] = {1.0, 2.0, -1.0, 0.5};
  for (std::size_t i = 0; i < 4; ++i) {
    a(i, 0) = col[i];
    a(i, 1) = col[i];
    a(i, 2) = i == 2 ? 1.0 : 0.0;
  }
  const auto kb = kernel(a);
  ASSERT_EQ(kb.vectors.size(), 1u);
  const auto& v = kb.vectors[0];
  EXPECT_NEAR(std::abs(v[0]), 1.0 / std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(v[0] + v[1], 0.0, 1e-12);
  EXPECT_NEAR(v[2], 0.0, 1e-12);
}

TEST(Kernel, OrthonormalVectors) {
  Matrix a(6, 4);
  for (std::size_t i = 0; i < 6; ++i) {
    a(i, 0) = static_cast<double>(i + 1);
    a(i, 1) = 2.0 * a(i, 0);
    a(i, 2) = std::sin(static_cast<double>(i));
    a(i, 3) = a(i, 2) - a(i, 0);
  }
  const auto kb = kernel(a);
  ASSERT_EQ(kb.vectors.size(), 2u);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q) {
      double d = 0.0;
      for (std::size_t j = 0; j < 4; ++j) d += kb.vectors[p][j] * kb.vectors[q][j];
      EXPECT_NEAR(d, p == q ? 1.0 : 0.0, 1e-10);
    }
}

TEST(Kernel, AmbiguousSpectrumIsReported) {
  Matrix a(5, 5);
  const double s[] = {1.0, 2e-8, 9e-9, 5e-9, 2e-9};
  for (std::size_t i = 0; i < 5; ++i) a(i, i) = s[i];
  try {
    kernel(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KernelAmbiguous);
    EXPECT_NE(std::string(e.what()).find("singular values"), std::string::npos);
  }
}

TEST(Kernel, RankDeficientPastThreshold) {
  // Several values sit under rtol but the cut belongs at the largest ratio.
  Matrix a(5, 5);
  const double s[] = {1.0, 1e-5, 4e-9, 2e-9, 0.0};
  for (std::size_t i = 0; i < 5; ++i) a(i, i) = s[i];
  EXPECT_EQ(kernel(a).vectors.size(), 1u);
  a(1, 1) = 0.5;
  EXPECT_EQ(kernel(a).vectors.size(), 3u);
  EXPECT_THROW(kernel(Matrix(2, 3)), Error);
}

TEST(Kernel, ShiftedUnitsDegreeThree) {
  const Lssm l = shifted_units();
  const MonomialBasis b(6, 3, false);
  std::vector<SymMatrix> pts;
  for (std::uint64_t s = 0; s < 105; ++s) pts.push_back(expm(sample(l, 1, s).matrix));
  EXPECT_EQ(kernel(vandermonde(pts, b)).vectors.size(), 1u);
}

TEST(Rationalize, Examples) {
  const double a[] = {0.5, -0.25};
  EXPECT_EQ(rationalize(a), (std::vector<Integer>{2, -1}));
  const double b[] = {0.333333333, 1.0};
  EXPECT_EQ(rationalize(b), (std::vector<Integer>{1, 3}));
  const double c[] = {-0.2, 0.4, 0.0};
  EXPECT_EQ(rationalize(c), (std::vector<Integer>{1, -2, 0}));
  const double pi[] = {1.0, std::numbers::pi};
  EXPECT_THROW(rationalize(pi, 5), Error);
}

TEST(Rationalize, ShiftedUnitsKernelIsPlusMinusOne) {
  const Lssm l = shifted_units();
  const MonomialBasis b(6, 3, false);
  std::vector<SymMatrix> pts;
  for (std::uint64_t s = 0; s < 105; ++s) pts.push_back(expm(sample(l, 1, s).matrix));
  const auto kb = kernel(vandermonde(pts, b));
  ASSERT_EQ(kb.vectors.size(), 1u);
  const auto coeffs = kb.coefficients(0);
  const auto r = rationalize(coeffs);
  for (const auto& c : r) EXPECT_LE(abs(c), 1);
  EXPECT_TRUE(same_up_to_sign(b.to_poly(r), shifted_units_cubic()));
}

TEST(Verify, SwapSendsCubicToMinusItself) {
  const RatPoly p = shifted_units_cubic();
  const Permutation swap{1, 0, 2};
  EXPECT_EQ(permute_polynomial(p, 3, swap), -p);
  VerifyOptions o;
  o.symmetries = {swap};
  const auto rep = verify({p}, shifted_units(), o);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_residual, 1e-9);
  EXPECT_LE(rep.symmetry_max_residual, 1e-9);
  EXPECT_EQ(rep.samples, 200u);
}

TEST(Verify, TrivialCases) {
  const Lssm diag = Lssm::from_graph(Graph(3, {}));
  EXPECT_TRUE(verify({RatPoly(6)}, diag).passed);
  const auto rep = verify({parse_polynomial("x11", vars3())}, diag);
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.failures.empty());
}

TEST(Verify, DetectsInvariantPermutations) {
  // Item 6 of the 3-chain catalogue has the end swap as a symmetry.
  const auto rep = verify({parse_polynomial("x11 - x33", vars3())}, chain3({0, 1, 0}, {0, 0}));
  EXPECT_TRUE(rep.passed);
  EXPECT_FALSE(rep.symmetries_used.empty());
}

TEST(Algorithm1, ShiftedUnitsCubic) {
  const auto r = run_algorithm1(shifted_units(), 3);
  ASSERT_EQ(r.polynomials.size(), 1u);
  EXPECT_TRUE(same_up_to_sign(r.polynomials[0], shifted_units_cubic()));
  EXPECT_EQ(r.degrees[0], 3u);
  EXPECT_EQ(r.term_counts[0], 12u);
  EXPECT_TRUE(r.verification.passed);
  EXPECT_FALSE(r.homogeneous_basis);
}

TEST(Algorithm1, CompleteGraphIsAmbient) {
  const auto r = run_algorithm1(Lssm::from_graph(Graph::complete(3)), 3);
  EXPECT_TRUE(r.polynomials.empty());
  EXPECT_EQ(r.per_degree.size(), 3u);
}

TEST(Algorithm1, GeneratorsAreNormalized) {
  const auto r = run_algorithm1(chain3({0, 0, 0}, {0, 0}), 3);
  ASSERT_FALSE(r.polynomials.empty());
  for (const auto& p : r.polynomials) {
    EXPECT_EQ(p, p.primitive());
    EXPECT_TRUE(p.is_homogeneous());
  }
  EXPECT_TRUE(r.verification.passed);
}

TEST(Algorithm1, DeterministicAndSeedIndependent) {
  const Lssm l = chain3({0, 0, 1}, {0, 0});
  Algorithm1Options o;
  o.seed = 7;
  const auto a = run_algorithm1(l, 3, o);
  const auto b = run_algorithm1(l, 3, o);
  EXPECT_EQ(a.polynomials, b.polynomials);
  o.seed = 8;
  const auto c = run_algorithm1(l, 3, o);
  EXPECT_EQ(as_strings(a), as_strings(c));
}

TEST(Algorithm1, HomogeneousBasisMatchesFullBasis) {
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> cases = {
      {{0, 0, 1}, {0, 0}}, {{0, 1, 0}, {0, 0}}, {{0, 0, 0}, {0, 0}}};
  for (const auto& [vc, ec] : cases) {
    const Lssm l = chain3(vc, ec);
    Algorithm1Options o;
    o.basis = BasisMode::Homogeneous;
    const auto h = run_algorithm1(l, 3, o);
    o.basis = BasisMode::Full;
    const auto f = run_algorithm1(l, 3, o);
    EXPECT_TRUE(h.homogeneous_basis);
    EXPECT_FALSE(f.homogeneous_basis);
    EXPECT_EQ(as_strings(h), as_strings(f));
  }
}

TEST(Algorithm1, StopAfterFirst) {
  Algorithm1Options o;
  o.stop_after_first = true;
  const auto r = run_algorithm1(chain3({0, 0, 0}, {0, 0}), 4, o);
  EXPECT_EQ(r.per_degree.size(), 1u);
  EXPECT_EQ(r.polynomials.size(), 3u);
}

TEST(Algorithm1, RejectsBadInput) {
  EXPECT_THROW(run_algorithm1(shifted_units(), 0), Error);
}
