#include "logsparse/lssm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "logsparse/error.hpp"
#include "logsparse/lattice.hpp"

namespace logsparse {
namespace {

RatRows packed_rows(const std::vector<RatSymMatrix>& basis) {
  RatRows rows;
  rows.reserve(basis.size());
  for (const auto& b : basis) rows.push_back(b.upper);
  return rows;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// p/q with 1 <= q <= 1000 and |p| <= q.
Rational random_rational(std::mt19937_64& rng) {
  const long q = 1 + static_cast<long>(rng() % 1000);
  const long p = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * q + 1)) - q;
  return Rational(p, q);
}

std::vector<Rational> random_point(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> a(d);
  for (auto& v : a) v = random_rational(rng);
  return a;
}

int centralizer_at(const Lssm& l, const std::vector<Rational>& a) {
  const std::size_t n = l.size();
  const std::size_t d = l.dim();
  const auto& basis = l.exact_basis();
  const RatSymMatrix am = l.exact_element(a);
  // Row (i, j), i < j, column k: entry (i, j) of A B_k - B_k A.
  RatRows eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RatVector row(d);
      for (std::size_t k = 0; k < d; ++k) {
        Rational s = 0;
        for (std::size_t t = 0; t < n; ++t) s += am(i, t) * basis[k](t, j) - basis[k](i, t) * am(t, j);
        row[k] = s;
      }
      eqs.push_back(std::move(row));
    }
  return static_cast<int>(d - exact_rank(eqs));
}

}  // namespace

Lssm Lssm::from_graph(const Graph& g) {
  auto pb = lssm_basis(g);
  Lssm l = from_basis(std::move(pb.basis), std::move(pb.labels));
  l.kind_ = PatternKind::Graph;
  l.graph_ = g;
  return l;
}

Lssm Lssm::from_coloured(const ColouredGraph& cg) {
  auto pb = coloured_lssm_basis(cg);
  Lssm l = from_basis(std::move(pb.basis), std::move(pb.labels));
  l.kind_ = PatternKind::Coloured;
  l.graph_ = cg.graph();
  l.coloured_ = cg;
  return l;
}

Lssm Lssm::from_basis(std::vector<SymMatrix> basis, std::vector<std::string> labels) {
  if (basis.empty()) throw Error(ErrorKind::InvalidInput, "lssm: empty basis");
  Lssm l;
  l.n_ = basis.front().size();
  for (const auto& b : basis)
    if (b.size() != l.n_) throw Error(ErrorKind::InvalidInput, "lssm: basis matrices differ in size");
  std::vector<RatSymMatrix> exact;
  bool rational = true;
  for (const auto& b : basis) {
    RatSymMatrix r(l.n_);
    for (std::size_t k = 0; k < r.upper.size() && rational; ++k) {
      const auto q = exact_small_rational(b.upper()[k]);
      if (q) r.upper[k] = *q;
      else rational = false;
    }
    if (!rational) break;
    exact.push_back(std::move(r));
  }
  l.basis_ = std::move(basis);
  if (rational) l.exact_ = std::move(exact);
  l.labels_ = std::move(labels);
  l.finish();
  return l;
}

Lssm Lssm::from_rational_basis(std::vector<RatSymMatrix> basis, std::vector<std::string> labels) {
  if (basis.empty()) throw Error(ErrorKind::InvalidInput, "lssm: empty basis");
  Lssm l;
  l.n_ = basis.front().n;
  for (const auto& b : basis) {
    if (b.n != l.n_) throw Error(ErrorKind::InvalidInput, "lssm: basis matrices differ in size");
    l.basis_.push_back(b.to_double());
  }
  l.exact_ = std::move(basis);
  l.labels_ = std::move(labels);
  l.finish();
  return l;
}

void Lssm::finish() {
  const std::size_t d = basis_.size();
  if (labels_.empty())
    for (std::size_t i = 0; i < d; ++i) labels_.push_back("y" + std::to_string(i + 1));
  if (labels_.size() != d) throw Error(ErrorKind::InvalidInput, "lssm: one label per basis element required");
  if (exact_) {
    RatRows rows = packed_rows(*exact_);
    if (exact_rank(rows) != d) throw Error(ErrorKind::InvalidInput, "lssm: basis is linearly dependent");
    RatVector id(SymMatrix::packed_size(n_), 0);
    for (std::size_t i = 0; i < n_; ++i) id[SymMatrix::packed_index(n_, i, i)] = 1;
    rows.push_back(std::move(id));
    contains_identity_ = exact_rank(rows) == d;
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<SymMatrix> prev(basis_.begin(), basis_.begin() + static_cast<std::ptrdiff_t>(i));
      const double nb = basis_[i].frobenius_norm();
      if (distance_to_span(basis_[i], prev) <= 1e-10 * std::max(1.0, nb))
        throw Error(ErrorKind::InvalidInput, "lssm: basis is numerically linearly dependent");
    }
    const SymMatrix id = SymMatrix::identity(n_);
    contains_identity_ = distance_to_span(id, basis_) <= 1e-10 * id.frobenius_norm();
  }
}

const std::vector<RatSymMatrix>& Lssm::exact_basis() const {
  if (!exact_)
    throw Error(ErrorKind::NonRationalBasis, "lssm: basis entries are not small rationals; exact routines need a rational LSSM");
  return *exact_;
}

SymMatrix Lssm::element(std::span<const double> y) const {
  if (y.size() != dim()) throw Error(ErrorKind::InvalidInput, "lssm: coordinate vector has wrong length");
  SymMatrix m(n_);
  for (std::size_t k = 0; k < dim(); ++k)
    for (std::size_t t = 0; t < m.upper().size(); ++t) m.upper()[t] += y[k] * basis_[k].upper()[t];
  return m;
}

RatSymMatrix Lssm::exact_element(std::span<const Rational> y) const {
  const auto& basis = exact_basis();
  if (y.size() != dim()) throw Error(ErrorKind::InvalidInput, "lssm: coordinate vector has wrong length");
  RatSymMatrix m(n_);
  for (std::size_t k = 0; k < dim(); ++k)
    for (std::size_t t = 0; t < m.upper.size(); ++t)
      if (basis[k].upper[t] != 0) m.upper[t] += y[k] * basis[k].upper[t];
  return m;
}

RatRows Lssm::constraints() const {
  RatRows rows = packed_rows(exact_basis());
  const auto pivots = rref(rows);
  const std::size_t big_n = SymMatrix::packed_size(n_);
  std::vector<bool> is_pivot(big_n, false);
  for (auto p : pivots) is_pivot[p] = true;
  RatRows out;
  for (std::size_t f = 0; f < big_n; ++f) {
    if (is_pivot[f]) continue;
    RatVector c(big_n, 0);
    c[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) c[pivots[r]] = -rows[r][f];
    out.push_back(std::move(c));
  }
  return out;
}

bool Lssm::invariant_under(const Permutation& sigma) const {
  if (sigma.size() != n_) throw Error(ErrorKind::InvalidInput, "lssm: permutation has wrong size");
  if (exact_) {
    RatRows rows = packed_rows(*exact_);
    for (const auto& b : *exact_) {
      RatSymMatrix img(n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) img.at(sigma[i], sigma[j]) = b(i, j);
      rows.push_back(img.upper);
      if (exact_rank(rows) != dim()) return false;
      rows.pop_back();
    }
    return true;
  }
  for (const auto& b : basis_)
    if (distance_to_span(permute(b, sigma), basis_) > 1e-10 * std::max(1.0, b.frobenius_norm())) return false;
  return true;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  // splitmix64 finalizer over a combined counter.
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Sample sample(const Lssm& l, std::uint64_t seed, std::uint64_t index, double scale) {
  std::mt19937_64 rng(mix_seed(seed, index));
  Sample s;
  s.y.resize(l.dim());
  for (auto& v : s.y) v = scale * (2.0 * unit_uniform(rng) - 1.0);
  s.matrix = l.element(s.y);
  return s;
}

CentralizerResult centralizer(const Lssm& l, std::uint64_t seed, int trials) {
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "centralizer: need at least one trial");
  CentralizerResult res;
  for (int t = 0; t < trials; ++t)
    res.trial_values.push_back(centralizer_at(l, random_point(l.dim(), mix_seed(seed, 0xC0000 + t))));
  const auto [lo, hi] = std::minmax_element(res.trial_values.begin(), res.trial_values.end());
  if (*lo != *hi) {
    res.trial_values.push_back(centralizer_at(l, random_point(l.dim(), mix_seed(seed, 0xC0000 + trials))));
    res.warnings.push_back("centralizer trials disagreed; ran a tie-break trial");
  }
  res.k = *std::min_element(res.trial_values.begin(), res.trial_values.end());
  return res;
}

int centralizer_dimension(const Lssm& l, std::uint64_t seed, int trials) {
  return centralizer(l, seed, trials).k;
}

std::vector<long> canonical_relation(std::vector<long> c) {
  std::vector<long> neg(c.size());
  std::transform(c.begin(), c.end(), neg.begin(), [](long v) { return -v; });
  std::sort(c.begin(), c.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  return std::max(c, neg);
}

namespace {

bool holds(const std::vector<long>& c, std::span<const double> lambda, const Permutation& perm, double tol) {
  double s = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s += static_cast<double>(c[i]) * lambda[perm[i]];
    scale = std::max(scale, std::abs(lambda[i]));
  }
  return std::abs(s) <= tol * scale;
}

}  // namespace

EigenSpan eigenvalue_span(const Lssm& l, const EigenSpanOptions& opts) {
  const std::size_t n = l.size();
  EigenSpan out;
  if (!opts.force_numeric && l.kind() == PatternKind::Graph && l.graph() && l.graph()->is_connected()) {
    out.m = static_cast<int>(n);
    out.shortcut = true;
    return out;
  }
  if (n == 1) {
    out.m = 1;
    return out;
  }
  const int npoints = std::max(1, opts.points);
  std::vector<std::vector<double>> lambdas;
  for (int p = 0; p < npoints; ++p) {
    const auto a = random_point(l.dim(), mix_seed(opts.seed, 0xE1000 + p));
    std::vector<double> y(a.size());
    std::transform(a.begin(), a.end(), y.begin(), [](const Rational& r) { return r.get_d(); });
    lambdas.push_back(eigh(l.element(y)).values);
  }
  auto candidates = integer_relations(lambdas[0], opts.lattice_scale, opts.height, opts.confirm_tol);

  Permutation ident(n);
  std::iota(ident.begin(), ident.end(), 0);
  std::vector<bool> alive(candidates.size(), true);
  for (int p = 1; p < npoints; ++p) {
    auto count = [&](const Permutation& perm) {
      std::size_t c = 0;
      for (std::size_t r = 0; r < candidates.size(); ++r)
        if (alive[r] && holds(candidates[r], lambdas[p], perm, opts.confirm_tol)) ++c;
      return c;
    };
    const std::size_t want = static_cast<std::size_t>(std::count(alive.begin(), alive.end(), true));
    Permutation best = ident;
    std::size_t best_count = count(ident);
    if (best_count < want && n <= 5) {
      Permutation perm = ident;
      while (std::next_permutation(perm.begin(), perm.end())) {
        const std::size_t c = count(perm);
        if (c > best_count) {
          best_count = c;
          best = perm;
        }
      }
    }
    for (std::size_t r = 0; r < candidates.size(); ++r)
      if (alive[r] && !holds(candidates[r], lambdas[p], best, opts.confirm_tol)) alive[r] = false;
  }

  RatRows independent;
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    if (!alive[r]) continue;
    RatVector row(candidates[r].begin(), candidates[r].end());
    independent.push_back(row);
    if (exact_rank(independent) == independent.size()) out.relations.push_back(candidates[r]);
    else independent.pop_back();
  }
  out.m = static_cast<int>(n - out.relations.size());
  return out;
}

int eigenvalue_span_dimension(const Lssm& l, const EigenSpanOptions& opts) {
  return eigenvalue_span(l, opts).m;
}

void validate_connected(const Lssm& l) {
  if (l.kind() != PatternKind::Generic && l.graph()) validate_connected(*l.graph());
}

DimensionReport gibbs_dimension(const Lssm& l, const DimensionOptions& opts) {
  validate_connected(l);
  DimensionReport r;
  r.n = l.size();
  r.d = l.dim();
  r.ambient = static_cast<long>(SymMatrix::packed_size(r.n));

  auto c = centralizer(l, opts.seed, opts.centralizer_trials);
  r.k = c.k;
  r.warnings = std::move(c.warnings);
  EigenSpanOptions eo = opts.eigen;
  eo.seed = opts.seed;
  const auto span = eigenvalue_span(l, eo);
  r.m = span.m;
  r.relations = span.relations;

  if (l.contains_identity() && r.k < std::min<int>(2, static_cast<int>(r.d)))
    throw Error(ErrorKind::VerificationFailed,
                "centralizer dimension " + std::to_string(r.k) + " below 2 although id lies in L");

  r.gv_dim = std::min<long>(r.m + static_cast<long>(r.d) - r.k, r.ambient);
  r.semialgebraic = r.m == r.k;
  r.bounds.push_back({"ambient", r.ambient});
  if (l.kind() == PatternKind::Graph) {
    const long e = static_cast<long>(l.graph()->edge_count());
    const long b = 2 * static_cast<long>(r.n) + e - 2;
    r.bounds.push_back({"2n+e-2", b});
    r.conjecture_value = std::min(b, r.ambient);
    if (*r.conjecture_value != r.gv_dim)
      r.warnings.push_back("computed dimension differs from the conjectured min(2n+e-2, ambient)");
  } else if (l.kind() == PatternKind::Coloured) {
    const auto& cg = *l.coloured();
    r.bounds.push_back({"n+p+q-2", static_cast<long>(r.n + cg.vertex_colour_count() + cg.edge_colour_count()) - 2});
  }
  for (const auto& b : r.bounds)
    if (r.gv_dim > b.value) r.warnings.push_back("dimension exceeds bound " + b.name);
  if (r.m < static_cast<int>(r.n))
    r.warnings.push_back("eigenvalues are Q-linearly dependent (m < n); the degree bound hypothesis fails");
  return r;
}

Integer degree_bound(unsigned n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "degree_bound: n must be positive");
  Integer out;
  const unsigned long e = static_cast<unsigned long>(n) * (n + 1) / 2 + 2ul * n;
  mpz_ui_pow_ui(out.get_mpz_t(), n, e);
  return out;
}

}  // namespace logsparse
