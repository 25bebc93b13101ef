#include "logsparse/symimpl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "logsparse/error.hpp"

namespace logsparse {

namespace {

using PolyMatrix = std::vector<std::vector<RatPoly>>;

std::vector<std::vector<std::string>> ring_blocks(std::size_t n) {
  std::vector<std::string> eig, x = matrix_variable_names(n);
  for (std::size_t i = 1; i <= n; ++i) eig.push_back("lam" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) eig.push_back("log" + std::to_string(i));
  return {eig, x};
}

PolyMatrix symbolic_matrix(const SymbolicRing& r) {
  const std::size_t nv = r.nvars();
  PolyMatrix x(r.n, std::vector<RatPoly>(r.n, RatPoly(nv)));
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t j = 0; j < r.n; ++j) x[i][j] = RatPoly::variable(nv, r.x(SymMatrix::packed_index(r.n, i, j)));
  return x;
}

PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b) {
  const std::size_t n = a.size();
  const std::size_t nv = a[0][0].nvars();
  PolyMatrix c(n, std::vector<RatPoly>(n, RatPoly(nv)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

PolyMatrix identity_matrix(std::size_t n, std::size_t nv) {
  PolyMatrix m(n, std::vector<RatPoly>(n, RatPoly(nv)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = RatPoly::constant(nv, Rational(1));
  return m;
}

RatPoly trace(const PolyMatrix& m) {
  RatPoly t(m[0][0].nvars());
  for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

// Laplace expansion along the first row; the matrices here are at most 4x4.
RatPoly determinant(const PolyMatrix& m) {
  const std::size_t k = m.size();
  if (k == 1) return m[0][0];
  RatPoly s(m[0][0].nvars());
  for (std::size_t j = 0; j < k; ++j) {
    if (m[0][j].is_zero()) continue;
    PolyMatrix sub;
    for (std::size_t i = 1; i < k; ++i) {
      std::vector<RatPoly> row;
      for (std::size_t c = 0; c < k; ++c)
        if (c != j) row.push_back(m[i][c]);
      sub.push_back(std::move(row));
    }
    const RatPoly t = m[0][j] * determinant(sub);
    if (j % 2) s -= t;
    else s += t;
  }
  return s;
}

void subsets(std::size_t n, std::size_t k, std::size_t from, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(n, k, 0, cur, out);
  return out;
}

// disc(X) = prod_{i<j} (lam_i - lam_j)^2 as the determinant of the Hankel
// matrix of power sums tr(X^(i+j)).
RatPoly discriminant(const PolyMatrix& x) {
  const std::size_t n = x.size();
  const std::size_t nv = x[0][0].nvars();
  std::vector<RatPoly> p;
  PolyMatrix power = identity_matrix(n, nv);
  for (std::size_t k = 0; k + 1 < 2 * n; ++k) {
    p.push_back(trace(power));
    if (k + 2 < 2 * n) power = multiply(power, x);
  }
  PolyMatrix h(n, std::vector<RatPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i][j] = p[i + j];
  return determinant(h).primitive();
}

// Packed indices of the entries that are nonzero on a few points of GM.
std::vector<std::size_t> entries_nonzero_on_gm(const Lssm& l, std::uint64_t seed) {
  const std::size_t np = SymMatrix::packed_size(l.size());
  std::vector<bool> seen(np, false);
  for (std::uint64_t i = 0; i < 3; ++i) {
    const SymMatrix x = expm(sample(l, seed, i).matrix);
    const double scale = std::max(1.0, x.max_abs());
    for (std::size_t k = 0; k < np; ++k)
      if (std::abs(x.upper()[k]) > 1e-12 * scale) seen[k] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < np; ++k)
    if (seen[k]) out.push_back(k);
  return out;
}

// L-constraint values of a polynomial matrix, one per constraint row.
std::vector<RatPoly> constraint_values(const RatRows& rows, const PolyMatrix& m) {
  const std::size_t n = m.size();
  std::vector<RatPoly> out;
  for (const auto& row : rows) {
    RatPoly f(m[0][0].nvars());
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        const Rational& c = row[SymMatrix::packed_index(n, a, b)];
        if (!(c == Rational(0))) f += c * m[a][b];
      }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

SymbolicRing::SymbolicRing(std::size_t n_) : n(n_), vars(ring_blocks(n_)) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "symbolic ring: n must be positive");
  if (vars.size() > kMaxVars) throw Error(ErrorKind::InvalidInput, "symbolic ring: too many variables");
}

RatPoly SymbolicRing::to_matrix_ring(const RatPoly& p) const {
  const std::size_t np = SymMatrix::packed_size(n);
  std::vector<std::size_t> map(nvars(), 0);
  for (std::size_t k = 0; k < np; ++k) map[x(k)] = k;
  return p.remap(map, np);
}

double SymbolicParametrization::log_entry(std::size_t i, std::size_t j, std::span<const double> point) const {
  return entries[SymMatrix::packed_index(ring.n, i, j)].evaluate(point) / denominator.evaluate(point);
}

SymbolicParametrization sylvester_parametrization(std::size_t n) {
  SymbolicParametrization out{SymbolicRing(n), {}, {}};
  const SymbolicRing& r = out.ring;
  const std::size_t nv = r.nvars();
  auto lam = [&](std::size_t i) { return RatPoly::variable(nv, r.lam(i)); };

  out.denominator = RatPoly::constant(nv, Rational(1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.denominator = out.denominator * (lam(i) - lam(j));

  const PolyMatrix x = symbolic_matrix(r);
  PolyMatrix total(n, std::vector<RatPoly>(n, RatPoly(nv)));
  for (std::size_t i = 0; i < n; ++i) {
    // D / prod_{j != i} (lam_i - lam_j): the pairs avoiding i, with one sign
    // flip for each j < i since D holds (lam_j - lam_i) there.
    RatPoly scale = RatPoly::constant(nv, Rational(i % 2 ? -1 : 1));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (a != i && b != i) scale = scale * (lam(a) - lam(b));
    PolyMatrix prod = identity_matrix(n, nv);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      PolyMatrix shifted = x;
      for (std::size_t k = 0; k < n; ++k) shifted[k][k] -= lam(j);
      prod = multiply(prod, shifted);
    }
    const RatPoly w = scale * RatPoly::variable(nv, r.log(i));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) total[a][b] += w * prod[a][b];
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) out.entries.push_back(std::move(total[a][b]));
  return out;
}

std::vector<RatPoly> charpoly_relations(const SymbolicRing& r) {
  const std::size_t n = r.n;
  const std::size_t nv = r.nvars();
  // Power sums tr(X^k), then Newton's identities for e_k(X).
  const PolyMatrix x = symbolic_matrix(r);
  std::vector<RatPoly> p(n + 1, RatPoly(nv));
  PolyMatrix power = x;
  for (std::size_t k = 1; k <= n; ++k) {
    p[k] = trace(power);
    if (k < n) power = multiply(power, x);
  }
  std::vector<RatPoly> e(n + 1, RatPoly(nv));
  e[0] = RatPoly::constant(nv, Rational(1));
  for (std::size_t k = 1; k <= n; ++k) {
    RatPoly acc(nv);
    for (std::size_t i = 1; i <= k; ++i) {
      const RatPoly t = e[k - i] * p[i];
      if (i % 2) acc += t;
      else acc -= t;
    }
    e[k] = Rational(1, static_cast<long>(k)) * acc;
  }
  // Elementary symmetric polynomials in the eigenvalue variables.
  std::vector<RatPoly> s(n + 1, RatPoly(nv));
  s[0] = RatPoly::constant(nv, Rational(1));
  for (std::size_t i = 0; i < n; ++i) {
    const RatPoly li = RatPoly::variable(nv, r.lam(i));
    for (std::size_t k = i + 1; k >= 1; --k) s[k] += li * s[k - 1];
  }
  std::vector<RatPoly> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(s[k] - e[k]);
  return out;
}

std::vector<double> symbolic_point(const SymbolicRing& r, const SymMatrix& x) {
  if (x.size() != r.n) throw Error(ErrorKind::InvalidInput, "symbolic_point: size mismatch");
  const auto eig = eigh(x);
  std::vector<double> pt(r.nvars());
  for (std::size_t i = 0; i < r.n; ++i) {
    if (!(eig.values[i] > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "symbolic_point: matrix is not positive definite");
    pt[r.lam(i)] = eig.values[i];
    pt[r.log(i)] = std::log(eig.values[i]);
  }
  const auto u = x.upper();
  for (std::size_t k = 0; k < u.size(); ++k) pt[r.x(k)] = u[k];
  return pt;
}

std::vector<RatPoly> centralizer_minors(const Lssm& l, std::uint64_t seed) {
  const std::size_t n = l.size();
  const std::size_t np = SymMatrix::packed_size(n);
  const RatRows rows = l.constraints();
  std::vector<RatPoly> out;
  PolyMatrix x(n, std::vector<RatPoly>(n, RatPoly(np)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i][j] = RatPoly::variable(np, SymMatrix::packed_index(n, i, j));
  // On GM the kernel of C(X) is span(id, X, ..., X^(n-1)) intersected with
  // L, of the generic centralizer dimension k, so rank C(X) <= n - k.
  const int k = centralizer_dimension(l, mix_seed(seed, 0xCE));
  std::vector<std::vector<RatPoly>> c(rows.size());
  PolyMatrix power = identity_matrix(n, np);
  for (std::size_t e = 0; e < n; ++e) {
    const auto vals = constraint_values(rows, power);
    // Identically zero columns (c(id) when id lies in L) carry no minors.
    if (std::any_of(vals.begin(), vals.end(), [](const RatPoly& v) { return !v.is_zero(); }))
      for (std::size_t i = 0; i < rows.size(); ++i) c[i].push_back(vals[i]);
    if (e + 1 < n) power = multiply(power, x);
  }
  const std::size_t cols = rows.empty() ? 0 : c[0].size();
  const std::size_t size = n + 1 - static_cast<std::size_t>(std::max(k, 1));
  if (size <= std::min(rows.size(), cols)) {
    const auto col_sets = subsets(cols, size);
    for (const auto& rs : subsets(rows.size(), size))
      for (const auto& cs : col_sets) {
        PolyMatrix sub;
        for (std::size_t i : rs) {
          std::vector<RatPoly> row;
          for (std::size_t j : cs) row.push_back(c[i][j]);
          sub.push_back(std::move(row));
        }
        const RatPoly d = determinant(sub);
        if (!d.is_zero()) out.push_back(d.primitive());
      }
  }
  return out;
}

Algorithm2Result run_algorithm2(const Lssm& l, const Algorithm2Options& opts) {
  const std::size_t n = l.size();
  validate_connected(l);
  EigenSpanOptions eo;
  eo.seed = opts.seed;
  const int m = eigenvalue_span_dimension(l, eo);
  if (m < static_cast<int>(n)) {
    std::ostringstream os;
    os << "run_algorithm2: eigenvalues span only " << m << " of " << n << " dimensions over Q";
    throw Error(ErrorKind::QDependentEigenvalues, os.str());
  }

  Algorithm2Result out;
  out.vars = matrix_variable_names(n);
  const std::size_t np = SymMatrix::packed_size(n);
  const RatRows rows = l.constraints();
  const SymbolicParametrization par = sylvester_parametrization(n);
  const SymbolicRing& r = par.ring;

  // E_1: every linear condition cutting L out of S^n, applied to D * log(X).
  for (const auto& row : rows) {
    RatPoly f(r.nvars());
    for (std::size_t k = 0; k < row.size(); ++k)
      if (!(row[k] == Rational(0))) f += row[k] * par.entries[k];
    if (!f.is_zero()) out.input.push_back(f.primitive());
  }
  for (auto& f : charpoly_relations(r)) out.input.push_back(f.primitive());

  const std::vector<std::size_t> nonzero = entries_nonzero_on_gm(l, mix_seed(opts.seed, 0xE7));

  if (opts.method == Algorithm2Method::Sylvester) {
    const std::size_t nv = r.nvars();
    RatPoly f = par.denominator;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        f = f * (RatPoly::variable(nv, r.log(i)) - RatPoly::variable(nv, r.log(j)));
    for (std::size_t k : nonzero) f = f * RatPoly::variable(nv, r.x(k));
    out.saturating = f;
    const MonomialOrder order(r.vars);
    const auto sat = saturate(out.input, f, order, opts.caps, &out.stats);
    for (const auto& g : eliminate(sat, order, 1)) out.generators.push_back(r.to_matrix_ring(g).primitive());
  } else {
    out.minors = centralizer_minors(l, opts.seed);
    PolyMatrix x(n, std::vector<RatPoly>(n, RatPoly(np)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) x[i][j] = RatPoly::variable(np, SymMatrix::packed_index(n, i, j));
    RatPoly f = discriminant(x);
    for (std::size_t e : nonzero) f = f * RatPoly::variable(np, e);
    out.saturating = f;
    if (!out.minors.empty()) {
      const MonomialOrder order = MonomialOrder::grevlex(np);
      for (const auto& g : saturate(out.minors, f, order, opts.caps, &out.stats)) out.generators.push_back(g.primitive());
    }
  }

  VerifyOptions vo = opts.verify;
  vo.seed = mix_seed(opts.seed, 0x5A7);
  out.verification = verify(out.generators, l, vo);
  if (!out.verification.passed) {
    std::ostringstream os;
    os << "run_algorithm2: generators do not vanish on the Gibbs manifold (max residual "
       << out.verification.max_residual << ")";
    throw Error(ErrorKind::VerificationFailed, os.str());
  }
  return out;
}

}  // namespace logsparse
