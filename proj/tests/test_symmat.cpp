#include <gtest/gtest.h>

#include <cmath>

#include "logsparse/error.hpp"
#include "logsparse/symmat.hpp"
#include "test_support.hpp"

using namespace logsparse;
using logsparse::testing::max_abs_diff;
using logsparse::testing::random_symmetric;

namespace {

// Partial sum of the power series, the defining formula for exp.
Matrix series_exp(const SymMatrix& s, int terms) {
  const Matrix a = s.dense();
  Matrix sum = Matrix::identity(s.size());
  Matrix term = sum;
  for (int k = 1; k < terms; ++k) {
    term = (1.0 / k) * (term * a);
    sum = sum + term;
  }
  return sum;
}

Matrix reconstruct(const EigenDecomposition& e) {
  const std::size_t n = e.values.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
  return e.vectors * d * e.vectors.transposed();
}

}  // namespace

TEST(SymMatrix, StorageIsSymmetric) {
  SymMatrix m(3);
  m.at(0, 2) = 5.0;
  EXPECT_EQ(m(2, 0), 5.0);
  EXPECT_EQ(m(0, 2), 5.0);
  const Matrix d = m.dense();
  EXPECT_EQ(max_abs_diff(d, d.transposed()), 0.0);
  EXPECT_THROW(SymMatrix::from_upper(3, {1, 2, 3}), Error);
}

TEST(SymMatrix, PackedIndexIsRowMajorUpper) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) EXPECT_EQ(SymMatrix::packed_index(4, i, j), k++);
}

TEST(Eigh, Identity) {
  const auto e = eigh(SymMatrix::identity(3));
  for (double v : e.values) EXPECT_EQ(v, 1.0);
  EXPECT_LE(max_abs_diff(e.vectors.transposed() * e.vectors, Matrix::identity(3)), 1e-12);
}

TEST(Eigh, DiagonalSortedAscending) {
  const double d[] = {3, 1, 2};
  const auto e = eigh(SymMatrix::diagonal(d));
  EXPECT_EQ(e.values, (std::vector<double>{1, 2, 3}));
}

TEST(Eigh, RandomReconstruction) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    const SymMatrix s = random_symmetric(n, rng, 3.0);
    const auto e = eigh(s);
    const double scale = std::max(1.0, s.max_abs());
    EXPECT_LE(max_abs_diff(reconstruct(e), s.dense()), 1e-12 * scale) << n;
    EXPECT_LE(max_abs_diff(e.vectors.transposed() * e.vectors, Matrix::identity(n)), 1e-12) << n;
    EXPECT_TRUE(std::is_sorted(e.values.begin(), e.values.end()));
  }
}

TEST(Expm, ZeroMapsToIdentity) { EXPECT_EQ(max_abs_diff(expm(SymMatrix(4)), SymMatrix::identity(4)), 0.0); }

TEST(Expm, Diagonal) {
  const double d[] = {-1.0, 0.5, 2.0};
  const SymMatrix e = expm(SymMatrix::diagonal(d));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(e(i, i), std::exp(d[i]), 1e-14 * std::exp(d[i]));
  EXPECT_EQ(e(0, 1), 0.0);
}

TEST(Expm, MatchesPowerSeries) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    SymMatrix s = random_symmetric(4, rng);
    const auto ev = eigh(s).values;
    const double rho = std::max(std::abs(ev.front()), std::abs(ev.back()));
    s *= 2.0 / rho;
    const Matrix oracle = series_exp(s, 60);
    EXPECT_LE(max_abs_diff(expm(s).dense(), oracle), 1e-12 * std::max(1.0, oracle.max_abs()));
  }
}

TEST(Expm, OutputPositiveDefinite) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) EXPECT_TRUE(is_positive_definite(eigh(expm(random_symmetric(5, rng, 2.0)))));
}

TEST(Logm, Basics) {
  EXPECT_LE(logm(SymMatrix::identity(3)).max_abs(), 1e-15);
  const SymMatrix l = logm(2.0 * SymMatrix::identity(2));
  EXPECT_NEAR(l(0, 0), std::log(2.0), 1e-15);
  EXPECT_NEAR(l(1, 1), std::log(2.0), 1e-15);
  EXPECT_EQ(l(0, 1), 0.0);
}

TEST(Logm, RejectsIndefinite) {
  const double d[] = {1.0, -1.0};
  try {
    logm(SymMatrix::diagonal(d));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
  const double tiny[] = {1.0, 1e-12};
  EXPECT_THROW(logm(SymMatrix::diagonal(tiny)), Error);
}

TEST(Logm, ExpLogRoundTrip) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix s = random_symmetric(4, rng, 2.0);
    EXPECT_LE(max_abs_diff(logm(expm(s)), s), 1e-10 * std::max(1.0, s.max_abs()));
    const SymMatrix p = expm(s);
    EXPECT_LE(max_abs_diff(expm(logm(p)), p), 1e-10 * p.max_abs());
  }
}

TEST(Logm, InverseIsExpOfNegativeLog) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix p = expm(random_symmetric(4, rng, 2.0));
    const Matrix inv = expm(-1.0 * logm(p)).dense();
    EXPECT_LE(max_abs_diff(inv * p.dense(), Matrix::identity(4)), 1e-9);
    EXPECT_LE(max_abs_diff(inv, inverse_pd(p).dense()), 1e-9 * inv.max_abs());
  }
}

TEST(Frechet, AtZeroIsIdentityMap) {
  std::mt19937_64 rng(8);
  const SymMatrix e = random_symmetric(3, rng);
  EXPECT_LE(max_abs_diff(frechet_exp(SymMatrix(3), e), e.dense()), 1e-14);
}

TEST(Frechet, DiagonalDividedDifferences) {
  const double a[] = {0.3, -1.2, 0.3, 1.5};
  const SymMatrix am = SymMatrix::diagonal(a);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t l = k + 1; l < 4; ++l) {
      SymMatrix e(4);
      e.at(k, l) = 1.0;
      const double expected =
          a[k] == a[l] ? std::exp(a[k]) : (std::exp(a[k]) - std::exp(a[l])) / (a[k] - a[l]);
      const Matrix f = frechet_exp(am, e);
      EXPECT_NEAR(f(k, l), expected, 1e-13 * std::abs(expected)) << k << l;
      EXPECT_NEAR(f(l, k), expected, 1e-13 * std::abs(expected));
    }
}

TEST(Frechet, CentralFiniteDifferences) {
  std::mt19937_64 rng(9);
  const double h = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const SymMatrix a = random_symmetric(4, rng);
    const SymMatrix e = random_symmetric(4, rng);
    const Matrix fd = (1.0 / (2 * h)) * (expm(a + h * e).dense() - expm(a - h * e).dense());
    EXPECT_LE(max_abs_diff(frechet_exp(a, e), fd), 1e-6);
  }
}

TEST(Frechet, LinearInDirection) {
  std::mt19937_64 rng(10);
  const SymMatrix a = random_symmetric(3, rng);
  const SymMatrix e1 = random_symmetric(3, rng);
  const SymMatrix e2 = random_symmetric(3, rng);
  const Matrix lhs = frechet_exp(a, 2.0 * e1 + (-0.5) * e2);
  const Matrix rhs = 2.0 * frechet_exp(a, e1) + (-0.5) * frechet_exp(a, e2);
  EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10);
}

TEST(Sylvester, IdentityFunctionGivesMatrix) {
  std::mt19937_64 rng(12);
  const SymMatrix m = random_symmetric(4, rng);
  const auto ev = eigh(m).values;
  EXPECT_LE(max_abs_diff(sylvester_apply(ev, m), m), 1e-10);
}

TEST(Sylvester, MatchesLogmAndExpm) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const SymMatrix p = expm(random_symmetric(3, rng));
    const auto ev = eigh(p).values;
    std::vector<double> lg(ev.size()), ex(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
      lg[i] = std::log(ev[i]);
      ex[i] = std::exp(ev[i]);
    }
    EXPECT_LE(max_abs_diff(sylvester_apply(lg, p), logm(p)), 1e-10);
    const SymMatrix e = expm(p);
    EXPECT_LE(max_abs_diff(sylvester_apply(ex, p), e), 1e-10 * e.max_abs());
  }
}

TEST(Sylvester, RejectsRepeatedEigenvalues) {
  const double one[] = {1.0, 1.0};
  try {
    sylvester_apply(one, SymMatrix::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSpectrum);
  }
}
