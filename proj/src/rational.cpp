#include "logsparse/rational.hpp"

#include <cmath>
#include <utility>

namespace logsparse {

SymMatrix RatSymMatrix::to_double() const {
  SymMatrix m(n);
  for (std::size_t k = 0; k < upper.size(); ++k) m.upper()[k] = upper[k].get_d();
  return m;
}

RatSymMatrix RatSymMatrix::from_double(const SymMatrix& m) {
  RatSymMatrix r(m.size());
  for (std::size_t k = 0; k < r.upper.size(); ++k) r.upper[k] = Rational(m.upper()[k]);
  return r;
}

std::size_t exact_rank(const RatRows& rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<Integer>> a;
  a.reserve(rows.size());
  for (const auto& r : rows) {
    Integer l = 1;
    for (const auto& v : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    std::vector<Integer> ir(cols);
    for (std::size_t j = 0; j < cols; ++j) ir[j] = Rational(r[j] * l).get_num();
    a.push_back(std::move(ir));
  }
  // Bareiss: every intermediate entry is an exact minor, so divisions are exact.
  Integer prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[rank], a[piv]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[rank][c] * a[i][j] - a[i][c] * a[rank][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

std::vector<std::size_t> rref(RatRows& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

Rational rational_from_double(double x, long maxden) {
  if (!std::isfinite(x)) return Rational(0);
  // Convergents h/k of the continued fraction of x, computed on the exact
  // dyadic value so no floating error accumulates.
  Rational rem(x);
  Integer h = 1, h_prev = 0;  // h_{-1}, h_{-2}
  Integer k = 0, k_prev = 1;  // k_{-1}, k_{-2}
  Rational best(0);
  for (int iter = 0; iter < 64; ++iter) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    Integer h_next = a * h + h_prev;
    Integer k_next = a * k + k_prev;
    if (iter > 0 && k_next > maxden) break;
    best = Rational(h_next, k_next);
    best.canonicalize();
    h_prev = std::exchange(h, h_next);
    k_prev = std::exchange(k, k_next);
    const Rational frac = rem - Rational(a);
    if (frac == 0) break;
    rem = 1 / frac;
  }
  return best;
}

std::optional<Rational> exact_small_rational(double x, long maxden) {
  const Rational r = rational_from_double(x, maxden);
  if (r.get_d() == x) return r;
  return std::nullopt;
}

}  // namespace logsparse
