#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "logsparse/lattice.hpp"
#include "logsparse/rational.hpp"

using namespace logsparse;

TEST(ExactRank, SmallCases) {
  EXPECT_EQ(exact_rank({}), 0u);
  EXPECT_EQ(exact_rank({{1, 2}, {2, 4}}), 1u);
  EXPECT_EQ(exact_rank({{Rational(1, 3), 1}, {1, 3}, {0, 1}}), 2u);
  // Hilbert matrices are notoriously ill-conditioned yet exactly nonsingular.
  RatRows h(6, RatVector(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) h[i][j] = Rational(1, i + j + 1);
  EXPECT_EQ(exact_rank(h), 6u);
  h[5] = h[0];
  EXPECT_EQ(exact_rank(h), 5u);
}

TEST(Rref, PivotsAndZeroRows) {
  RatRows m = {{2, 4, 0}, {1, 2, 1}, {3, 6, 1}};
  const auto piv = rref(m);
  EXPECT_EQ(piv, (std::vector<std::size_t>{0, 2}));
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], (RatVector{1, 2, 0}));
  EXPECT_EQ(m[1], (RatVector{0, 0, 1}));
}

TEST(RationalFromDouble, ContinuedFractions) {
  EXPECT_EQ(rational_from_double(0.333333333, 1000000), Rational(1, 3));
  EXPECT_EQ(rational_from_double(-0.25, 10), Rational(-1, 4));
  EXPECT_EQ(rational_from_double(std::numbers::pi, 1000), Rational(355, 113));
  EXPECT_EQ(rational_from_double(3.0, 1), Rational(3));
}

TEST(ExactSmallRational, RoundTripOnly) {
  EXPECT_EQ(exact_small_rational(0.5), Rational(1, 2));
  EXPECT_EQ(exact_small_rational(1.0 / 3.0), Rational(1, 3));
  EXPECT_FALSE(exact_small_rational(std::numbers::pi).has_value());
}

TEST(Lll, ReducesKnownBasis) {
  // Classic example with reduced basis of short vectors.
  std::vector<IntVector> b = {{1, 1, 1}, {-1, 0, 2}, {3, 5, 6}};
  const auto r = lll_reduce(b);
  ASSERT_EQ(r.size(), 3u);
  Integer maxnorm = 0;
  for (const auto& v : r) {
    Integer s = 0;
    for (const auto& c : v) s += c * c;
    maxnorm = std::max(maxnorm, s);
  }
  EXPECT_LE(maxnorm, 5);
}

TEST(IntegerRelations, FindsPlantedRelation) {
  const double s2 = std::sqrt(2.0);
  const double x[] = {1.0, s2, 1.0 + s2};
  const auto rel = integer_relations(x, 1e10, 10, 1e-8);
  ASSERT_EQ(rel.size(), 1u);
  const auto& c = rel.front();
  EXPECT_EQ(std::abs(c[0]), 1);
  EXPECT_EQ(c[0], c[1]);
  EXPECT_EQ(c[2], -c[0]);
}

TEST(IntegerRelations, NoneForIndependentValues) {
  const double x[] = {1.0, std::sqrt(2.0), std::sqrt(3.0), std::log(5.0)};
  const auto rel = integer_relations(x, 1e10, 10, 1e-12);
  EXPECT_TRUE(rel.empty());
}
