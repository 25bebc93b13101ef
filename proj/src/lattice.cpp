#include "logsparse/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "logsparse/error.hpp"

namespace logsparse {
namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct GramSchmidt {
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> norms;  // |b*_i|^2
};

GramSchmidt gram_schmidt(const std::vector<IntVector>& b) {
  const std::size_t k = b.size();
  GramSchmidt gs;
  gs.mu.assign(k, std::vector<Rational>(k, 0));
  gs.norms.assign(k, 0);
  std::vector<std::vector<Rational>> star(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rational> bi(b[i].begin(), b[i].end());
    star[i] = bi;
    for (std::size_t j = 0; j < i; ++j) {
      if (gs.norms[j] == 0) continue;
      gs.mu[i][j] = dot(bi, star[j]) / gs.norms[j];
      for (std::size_t c = 0; c < bi.size(); ++c) star[i][c] -= gs.mu[i][j] * star[j][c];
    }
    gs.norms[i] = dot(star[i], star[i]);
  }
  return gs;
}

Integer round_nearest(const Rational& r) {
  Rational shifted = r + Rational(1, 2);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return q;
}

}  // namespace

std::vector<IntVector> lll_reduce(std::vector<IntVector> b, const Rational& delta) {
  const std::size_t k = b.size();
  if (k < 2) return b;
  GramSchmidt gs = gram_schmidt(b);
  std::size_t i = 1;
  std::size_t guard = 0;
  while (i < k) {
    if (++guard > 100000) throw Error(ErrorKind::NoConvergence, "lll_reduce: iteration cap");
    for (std::size_t j = i; j-- > 0;) {
      const Integer q = round_nearest(gs.mu[i][j]);
      if (q == 0) continue;
      for (std::size_t c = 0; c < b[i].size(); ++c) b[i][c] -= q * b[j][c];
      for (std::size_t l = 0; l < j; ++l) gs.mu[i][l] -= Rational(q) * gs.mu[j][l];
      gs.mu[i][j] -= Rational(q);
    }
    const Rational m = gs.mu[i][i - 1];
    if (gs.norms[i] >= (delta - m * m) * gs.norms[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      gs = gram_schmidt(b);
      i = std::max<std::size_t>(i - 1, 1);
    }
  }
  return b;
}

std::vector<std::vector<long>> integer_relations(std::span<const double> x, double scale, long height,
                                                 double tol) {
  const std::size_t n = x.size();
  double xmax = 1.0;
  for (double v : x) xmax = std::max(xmax, std::abs(v));
  std::vector<IntVector> basis(n, IntVector(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    basis[i][i] = 1;
    basis[i][n] = Integer(std::lround(scale * x[i]));
  }
  const auto reduced = lll_reduce(std::move(basis));
  std::vector<std::vector<long>> out;
  for (const auto& v : reduced) {
    std::vector<long> c(n);
    bool small = true;
    for (std::size_t i = 0; i < n && small; ++i) {
      if (abs(v[i]) > height) small = false;
      else c[i] = v[i].get_si();
    }
    if (!small) continue;
    if (std::all_of(c.begin(), c.end(), [](long t) { return t == 0; })) continue;
    long double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(c[i]) * x[i];
    if (std::abs(static_cast<double>(s)) <= tol * xmax) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace logsparse
