#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "logsparse/symmat.hpp"

namespace logsparse {

using Integer = mpz_class;
using Rational = mpq_class;

using RatVector = std::vector<Rational>;
using RatRows = std::vector<RatVector>;

/// Exact symmetric matrix, same packed layout as SymMatrix.
struct RatSymMatrix {
  std::size_t n = 0;
  std::vector<Rational> upper;

  explicit RatSymMatrix(std::size_t size = 0) : n(size), upper(SymMatrix::packed_size(size)) {}

  const Rational& operator()(std::size_t i, std::size_t j) const {
    return upper[SymMatrix::packed_index(n, i, j)];
  }
  Rational& at(std::size_t i, std::size_t j) { return upper[SymMatrix::packed_index(n, i, j)]; }

  SymMatrix to_double() const;
  /// Exact conversion (every double is a dyadic rational).
  static RatSymMatrix from_double(const SymMatrix& m);
};

/// Rank over Q by fraction-free (Bareiss) elimination after clearing row denominators.
std::size_t exact_rank(const RatRows& rows);

/// In-place reduced row echelon form over Q. Zero rows are removed; returns
/// the pivot column of each remaining row.
std::vector<std::size_t> rref(RatRows& rows);

/// Best rational approximation by continued-fraction convergents with
/// denominator <= maxden.
Rational rational_from_double(double x, long maxden);

/// Rational p/q with q <= maxden whose double value is exactly x, if any.
std::optional<Rational> exact_small_rational(double x, long maxden = 1'000'000);

}  // namespace logsparse
