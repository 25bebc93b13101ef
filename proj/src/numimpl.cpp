#include "logsparse/numimpl.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "logsparse/error.hpp"
#include "logsparse/simd/kernels.hpp"

namespace logsparse {

namespace {

void enumerate_degree(std::size_t nvars, std::size_t var, unsigned remaining, Monomial& cur,
                      std::vector<Monomial>& out) {
  if (var + 1 == nvars) {
    cur.e[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    cur.e[var] = 0;
    return;
  }
  for (unsigned k = remaining + 1; k-- > 0;) {
    cur.e[var] = static_cast<std::uint8_t>(k);
    enumerate_degree(nvars, var + 1, remaining - k, cur, out);
  }
  cur.e[var] = 0;
}

double norm2(std::span<const double> v) { return std::sqrt(simd::kernels().dot(v.data(), v.data(), v.size())); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

/// Adds v to the orthonormal set q unless it is numerically dependent.
bool orthonormal_append(std::vector<std::vector<double>>& q, std::vector<double> v, double drop_tol) {
  const auto& k = simd::kernels();
  const double before = norm2(v);
  if (before == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& u : q) axpy(-k.dot(u.data(), v.data(), v.size()), u, v);
  const double after = norm2(v);
  if (after <= drop_tol * before) return false;
  k.scale(v.data(), 1.0 / after, v.size());
  q.push_back(std::move(v));
  return true;
}

std::string spectrum_summary(const std::vector<double>& s, std::size_t around) {
  std::ostringstream os;
  os.precision(3);
  const std::size_t lo = around > 4 ? around - 4 : 0;
  const std::size_t hi = std::min(s.size(), around + 4);
  os << "relative singular values [" << lo << ".." << hi << "):";
  for (std::size_t i = lo; i < hi; ++i) os << ' ' << (s[0] > 0 ? s[i] / s[0] : 0.0);
  return os.str();
}

FloatKernelBasis kernel_core(std::vector<double>& a, std::size_t m, std::size_t n, double rtol, double gap,
                             std::vector<double> scale) {
  if (m < n) throw Error(ErrorKind::InvalidInput, "kernel: need at least as many rows as columns");
  FloatKernelBasis out;
  out.column_scale = std::move(scale);
  if (n == 0) return out;
  // Divide-and-conquer SVD of the whole matrix; only V is needed.
  const Eigen::Map<const Eigen::MatrixXd> mat(a.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinV);
  a.clear();
  a.shrink_to_fit();
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + n);
  const Eigen::MatrixXd& vmat = svd.matrixV();

  // tol bounds the kernel from above. Below it the split goes where
  // consecutive singular values differ most, and that ratio must reach gap.
  // Values under the double-precision floor count as the floor.
  const auto& s = out.singular_values;
  out.tol_used = rtol * s[0];
  const double floor = std::numeric_limits<double>::epsilon() * s[0];
  auto clamped = [&](std::size_t i) { return std::max(s[i], floor); };
  std::size_t first_small = 0;
  while (first_small < n && s[first_small] > out.tol_used) ++first_small;
  std::size_t kept = n;
  double best = 0.0;
  for (std::size_t k = std::max<std::size_t>(first_small, 1); k < n; ++k) {
    const double r = clamped(k - 1) / clamped(k);
    if (r > best) {
      best = r;
      kept = k;
    }
  }
  if (first_small == 0 && n > 0) {
    kept = 0;  // every value is below tol: the matrix is numerically zero
  } else if (first_small < n && best < gap) {
    throw Error(ErrorKind::KernelAmbiguous, "kernel: no singular-value gap of " + std::to_string(gap) +
                                                " below the threshold; " + spectrum_summary(s, first_small));
  }
  // The columns of V past `kept` span the kernel.
  for (std::size_t i = kept; i < n; ++i) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = vmat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

/// Solves R a = e_k for every k by Gaussian elimination with partial pivoting.
Matrix inverse_small(Matrix r) {
  const std::size_t n = r.rows();
  Matrix inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(r(i, c)) > std::abs(r(p, c))) p = i;
    if (r(p, c) == 0.0) throw Error(ErrorKind::RationalizationFailed, "rationalize_span: singular pivot block");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(r(c, j), r(p, j));
      std::swap(inv(c, j), inv(p, j));
    }
    const double d = r(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      r(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || r(i, c) == 0.0) continue;
      const double f = r(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        r(i, j) -= f * r(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

std::vector<Permutation> invariant_permutations(const Lssm& l) {
  std::vector<Permutation> out;
  const std::size_t n = l.size();
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> candidates;
  if (l.coloured()) {
    candidates = automorphisms(*l.coloured());
  } else if (l.graph()) {
    candidates = automorphisms(*l.graph());
  } else if (n <= 6) {
    Permutation p = id;
    do candidates.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }
  for (auto& p : candidates)
    if (p != id && l.invariant_under(p)) out.push_back(std::move(p));
  return out;
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t nvars, unsigned degree, bool homogeneous)
    : nvars_(nvars), degree_(degree), homogeneous_(homogeneous) {
  if (nvars > kMaxVars) throw Error(ErrorKind::InvalidInput, "MonomialBasis: at most 32 variables");
  if (degree > 255) throw Error(ErrorKind::InvalidInput, "MonomialBasis: degree above 255");
  for (unsigned d = homogeneous ? degree : 0; d <= degree; ++d) {
    if (nvars == 0) {
      if (d == 0) monomials_.emplace_back();
      continue;
    }
    Monomial cur;
    enumerate_degree(nvars, 0, d, cur, monomials_);
  }
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i].e, i);
}

std::size_t MonomialBasis::index_of(const Monomial& m) const {
  const auto it = index_.find(m.e);
  return it == index_.end() ? monomials_.size() : it->second;
}

RatPoly MonomialBasis::to_poly(std::span<const Integer> coeffs) const {
  std::vector<RatPoly::Term> terms;
  for (std::size_t i = 0; i < coeffs.size() && i < monomials_.size(); ++i)
    if (coeffs[i] != 0) terms.push_back({monomials_[i], Rational(coeffs[i])});
  return RatPoly::from_terms(nvars_, std::move(terms));
}

VandermondeMatrix vandermonde(const std::vector<SymMatrix>& points, const MonomialBasis& basis) {
  const auto& k = simd::kernels();
  const std::size_t nv = basis.nvars();
  VandermondeMatrix out;
  out.rows = points.size();
  out.cols = basis.size();
  out.data.assign(out.rows * out.cols, 0.0);
  out.column_norms.assign(out.cols, 1.0);

  // Every monomial of degree <= l, each built from a parent one degree lower
  // by one more factor of its last variable.
  std::vector<Monomial> chain{Monomial{}};
  std::vector<std::size_t> parent{0}, factor{0};
  std::size_t level_begin = 0;
  for (unsigned d = 1; d <= basis.degree(); ++d) {
    const std::size_t level_end = chain.size();
    for (std::size_t p = level_begin; p < level_end; ++p) {
      std::size_t last = 0;
      for (std::size_t v = 0; v < nv; ++v)
        if (chain[p].e[v]) last = v;
      for (std::size_t v = last; v < nv; ++v) {
        Monomial c = chain[p];
        ++c.e[v];
        chain.push_back(c);
        parent.push_back(p);
        factor.push_back(v);
      }
    }
    level_begin = level_end;
  }
  std::vector<std::size_t> target(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) target[i] = basis.index_of(chain[i]);

  constexpr std::size_t kBlock = 64;
  std::vector<double> xs(nv * kBlock), scratch(chain.size() * kBlock);
  for (std::size_t r0 = 0; r0 < out.rows; r0 += kBlock) {
    const std::size_t nb = std::min(kBlock, out.rows - r0);
    for (std::size_t r = 0; r < nb; ++r) {
      const auto u = points[r0 + r].upper();
      if (u.size() != nv) throw Error(ErrorKind::InvalidInput, "vandermonde: point size does not match the basis");
      for (std::size_t v = 0; v < nv; ++v) xs[v * kBlock + r] = u[v];
    }
    std::fill_n(scratch.begin(), nb, 1.0);
    for (std::size_t c = 1; c < chain.size(); ++c)
      k.mul(&scratch[parent[c] * kBlock], &xs[factor[c] * kBlock], &scratch[c * kBlock], nb);
    for (std::size_t c = 0; c < chain.size(); ++c)
      if (target[c] < out.cols) std::copy_n(&scratch[c * kBlock], nb, &out.data[target[c] * out.rows + r0]);
  }
  for (std::size_t c = 0; c < out.cols; ++c) {
    double* col = &out.data[c * out.rows];
    const double nrm = std::sqrt(k.dot(col, col, out.rows));
    if (nrm > 0.0) {
      k.scale(col, 1.0 / nrm, out.rows);
      out.column_norms[c] = nrm;
    }
  }
  return out;
}

std::vector<double> FloatKernelBasis::coefficients(std::size_t i) const {
  std::vector<double> c = vectors.at(i);
  if (!column_scale.empty())
    for (std::size_t j = 0; j < c.size(); ++j) c[j] /= column_scale[j];
  return c;
}

FloatKernelBasis kernel(VandermondeMatrix a, double rtol, double gap) {
  return kernel_core(a.data, a.rows, a.cols, rtol, gap, std::move(a.column_norms));
}

FloatKernelBasis kernel(const Matrix& a, double rtol, double gap) {
  std::vector<double> cm(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) cm[j * a.rows() + i] = a(i, j);
  return kernel_core(cm, a.rows(), a.cols(), rtol, gap, {});
}

std::vector<Integer> rationalize(std::span<const double> v, long maxden) {
  std::size_t imax = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v.empty() || v[imax] == 0.0 || !std::isfinite(v[imax]))
    throw Error(ErrorKind::RationalizationFailed, "rationalize: zero or non-finite vector");
  const double big = std::abs(v[imax]);
  std::vector<Rational> q(v.size());
  Integer den = 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    q[i] = rational_from_double(v[i] / big, maxden);
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q[i].get_den_mpz_t());
  }
  std::vector<Integer> out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = Rational(q[i] * den).get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  const auto first = std::find_if(out.begin(), out.end(), [](const Integer& x) { return x != 0; });
  if (first == out.end()) throw Error(ErrorKind::RationalizationFailed, "rationalize: every entry rounded to zero");
  if (*first < 0) g = -g;
  for (auto& x : out) x /= g;

  // Angle between the rational direction and v.
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = out[i].get_d();
  const double rn = norm2(r), vn = norm2(v);
  const double c = simd::kernels().dot(r.data(), v.data(), v.size()) / (rn * vn);
  double off = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = r[i] / rn - c * v[i] / vn;
    off += d * d;
  }
  const double angle = std::sqrt(off);
  if (!(angle <= 1e-6)) {
    std::ostringstream os;
    os << "rationalize: best rational vector with denominators <= " << maxden << " is off by angle " << angle;
    throw Error(ErrorKind::RationalizationFailed, os.str());
  }
  return out;
}

std::vector<std::vector<Integer>> rationalize_span(const std::vector<std::vector<double>>& vectors,
                                                   const MonomialBasis& basis, long maxden,
                                                   std::span<const double> column_scale) {
  const std::size_t r = vectors.size();
  if (r == 0) return {};
  const std::size_t len = vectors[0].size();
  auto unscale = [&](std::vector<double> v) {
    if (!column_scale.empty())
      for (std::size_t j = 0; j < len; ++j) v[j] /= column_scale[j];
    return v;
  };
  if (r == 1) return {rationalize(unscale(vectors[0]), maxden)};

  // Pivot coordinates walk the monomials from the graded-lex largest down,
  // taking the first one whose residual is within a factor 10 of the best
  // remaining one. That keeps the pivot block well conditioned.
  std::vector<std::size_t> order(len);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return graded_lex_compare(basis.monomials()[a], basis.monomials()[b]) > 0;
  });
  std::vector<std::vector<double>> res(len, std::vector<double>(r));
  for (std::size_t j = 0; j < len; ++j)
    for (std::size_t i = 0; i < r; ++i) res[j][i] = vectors[i][j];
  std::vector<bool> used(len, false);
  std::vector<std::size_t> pivots;
  while (pivots.size() < r) {
    double best = 0.0;
    for (std::size_t j = 0; j < len; ++j)
      if (!used[j]) best = std::max(best, norm2(res[j]));
    if (best <= 1e-8) break;
    std::size_t pick = len;
    for (std::size_t j : order)
      if (!used[j] && norm2(res[j]) >= 0.1 * best) {
        pick = j;
        break;
      }
    used[pick] = true;
    pivots.push_back(pick);
    std::vector<double> q = res[pick];
    simd::kernels().scale(q.data(), 1.0 / norm2(q), r);
    for (std::size_t j = 0; j < len; ++j)
      if (!used[j]) axpy(-simd::kernels().dot(q.data(), res[j].data(), r), q, res[j]);
  }
  if (pivots.size() < r) throw Error(ErrorKind::RationalizationFailed, "rationalize_span: kernel vectors are dependent");

  Matrix block(r, r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < r; ++i) block(k, i) = vectors[i][pivots[k]];
  const Matrix inv = inverse_small(block);
  std::vector<std::vector<Integer>> out;
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<double> b(len, 0.0);
    for (std::size_t i = 0; i < r; ++i) axpy(inv(i, k), vectors[i], b);
    out.push_back(rationalize(unscale(std::move(b)), maxden));
  }
  return out;
}

double normalized_residual(const RatPoly& p, std::span<const double> point) {
  if (p.is_zero()) return 0.0;
  double inf = 0.0;
  for (double x : point) inf = std::max(inf, std::abs(x));
  const double scale = p.l1_norm() * std::pow(std::max(1.0, inf), p.degree());
  return std::abs(p.evaluate(point)) / scale;
}

RatPoly permute_polynomial(const RatPoly& p, std::size_t n, const Permutation& sigma) {
  const std::size_t nv = SymMatrix::packed_size(n);
  std::vector<RatPoly> images;
  images.reserve(nv);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      images.push_back(RatPoly::variable(nv, SymMatrix::packed_index(n, sigma[i], sigma[j])));
  return p.substitute(images);
}

VerifyReport verify(const std::vector<RatPoly>& polys, const Lssm& l, const VerifyOptions& opts) {
  VerifyReport rep;
  rep.samples = opts.samples;
  rep.residuals.assign(polys.size(), 0.0);
  rep.symmetries_used = opts.symmetries;
  if (opts.detect_symmetries)
    for (auto& p : invariant_permutations(l))
      if (std::find(rep.symmetries_used.begin(), rep.symmetries_used.end(), p) == rep.symmetries_used.end())
        rep.symmetries_used.push_back(std::move(p));

  std::vector<std::vector<RatPoly>> images(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (const auto& s : rep.symmetries_used) images[i].push_back(permute_polynomial(polys[i], l.size(), s));

  for (std::size_t s = 0; s < opts.samples; ++s) {
    const SymMatrix x = expm(sample(l, mix_seed(opts.seed, 0xBEEF0000ULL), s, opts.sample_scale).matrix);
    for (std::size_t i = 0; i < polys.size(); ++i) {
      rep.residuals[i] = std::max(rep.residuals[i], normalized_residual(polys[i], x.upper()));
      for (const auto& q : images[i])
        rep.symmetry_max_residual = std::max(rep.symmetry_max_residual, normalized_residual(q, x.upper()));
    }
  }
  for (std::size_t i = 0; i < polys.size(); ++i) {
    rep.max_residual = std::max(rep.max_residual, rep.residuals[i]);
    if (!(rep.residuals[i] <= opts.tol)) {
      std::ostringstream os;
      os << "polynomial " << i << " has normalized residual " << rep.residuals[i];
      rep.failures.push_back(os.str());
    }
  }
  if (!(rep.symmetry_max_residual <= opts.tol)) {
    std::ostringstream os;
    os << "a permuted generator has normalized residual " << rep.symmetry_max_residual;
    rep.failures.push_back(os.str());
  }
  rep.passed = rep.failures.empty();
  return rep;
}

RationalEquationSet run_algorithm1(const Lssm& l, unsigned maxdeg, const Algorithm1Options& opts) {
  using clock = std::chrono::steady_clock;
  const std::size_t n = l.size();
  const std::size_t nv = SymMatrix::packed_size(n);
  if (nv > kMaxVars) throw Error(ErrorKind::InvalidInput, "run_algorithm1: matrix size too large");
  if (maxdeg == 0) throw Error(ErrorKind::InvalidInput, "run_algorithm1: maxdeg must be positive");

  RationalEquationSet out;
  out.n = n;
  out.vars = matrix_variable_names(n);
  const bool connected_graph = l.kind() == PatternKind::Graph && l.graph() && l.graph()->is_connected();
  if (!connected_graph) {
    EigenSpanOptions eo;
    eo.seed = opts.seed;
    if (eigenvalue_span_dimension(l, eo) < static_cast<int>(n))
      out.warnings.push_back("eigenvalues are Q-linearly dependent; equations found may not cut out GV(L)");
  }
  out.homogeneous_basis = opts.basis == BasisMode::Homogeneous ||
                          (opts.basis == BasisMode::Auto && l.contains_identity());
  VerifyOptions vo = opts.verify;
  vo.seed = mix_seed(opts.seed, 0x5E1F);

  for (unsigned deg = 1; deg <= maxdeg; ++deg) {
    const auto t0 = clock::now();
    DegreeSummary sum;
    sum.degree = deg;
    const MonomialBasis basis(nv, deg, out.homogeneous_basis);
    sum.basis_size = basis.size();
    sum.samples = static_cast<std::size_t>(std::ceil(opts.oversample * static_cast<double>(basis.size())));
    sum.samples = std::max(sum.samples, basis.size() + 1);

    std::vector<SymMatrix> points;
    points.reserve(sum.samples);
    const std::uint64_t stream = mix_seed(opts.seed, 0xA1000ULL + deg);
    const double scale = opts.sample_scale > 0 ? opts.sample_scale : (out.homogeneous_basis ? 2.0 : 1.0);
    for (std::size_t s = 0; s < sum.samples; ++s) {
      SymMatrix p = expm(sample(l, stream, s, scale).matrix);
      // Rescaling a point rescales its row when every column has the same degree.
      if (out.homogeneous_basis) p *= 1.0 / p.frobenius_norm();
      points.push_back(std::move(p));
    }
    FloatKernelBasis kb = kernel(vandermonde(points, basis), opts.rtol, opts.gap);
    points.clear();
    const auto& sv = kb.singular_values;
    sum.kernel_dim = kb.vectors.size();
    sum.sigma_max = sv.empty() ? 0.0 : sv[0];
    const std::size_t kept = sv.size() - kb.vectors.size();
    sum.sigma_kept_min = kept ? sv[kept - 1] : 0.0;
    sum.sigma_discarded_max = kept < sv.size() ? sv[kept] : 0.0;

    const std::vector<std::vector<Integer>> rows = rationalize_span(kb.vectors, basis, opts.maxden, kb.column_scale);

    // Multiples of earlier generators, in the scaled coordinates. Kernel rows
    // inside their span are deflated; the sparsest rows outside it are new.
    std::vector<std::vector<double>> w;
    for (const auto& g : out.polynomials) {
      if (rows.empty()) break;
      const int gd = g.degree();
      if (gd > static_cast<int>(deg)) continue;
      if (out.homogeneous_basis && !g.is_homogeneous()) continue;
      const MonomialBasis mult(nv, deg - static_cast<unsigned>(gd), out.homogeneous_basis);
      for (const auto& m : mult.monomials()) {
        std::vector<double> v(basis.size(), 0.0);
        for (const auto& t : g.terms()) {
          const std::size_t idx = basis.index_of(m * t.mono);
          if (idx < basis.size()) v[idx] = t.coeff.get_d() * kb.column_scale[idx];
        }
        orthonormal_append(w, std::move(v), 1e-8);
      }
    }
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    auto nonzeros = [&](std::size_t i) { return std::count_if(rows[i].begin(), rows[i].end(), [](const Integer& c) { return c != 0; }); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nonzeros(a) < nonzeros(b); });
    std::vector<RatPoly> found;
    for (std::size_t i : order) {
      std::vector<double> v(basis.size());
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = rows[i][j].get_d() * kb.column_scale[j];
      if (orthonormal_append(w, std::move(v), 1e-6)) found.push_back(basis.to_poly(rows[i]).primitive());
    }
    sum.deflated = rows.size() - found.size();

    const VerifyReport vr = verify(found, l, vo);
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (!(vr.residuals[i] <= vo.tol)) {
        std::ostringstream os;
        os << "degree " << deg << ": dropped a kernel vector whose rationalization has residual " << vr.residuals[i];
        out.warnings.push_back(os.str());
        continue;
      }
      out.degrees.push_back(static_cast<unsigned>(found[i].degree()));
      out.term_counts.push_back(found[i].term_count());
      out.polynomials.push_back(std::move(found[i]));
      ++sum.found;
    }
    sum.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.per_degree.push_back(sum);
    if (opts.stop_after_first && !out.polynomials.empty()) break;
  }
  out.verification = verify(out.polynomials, l, vo);
  if (!out.verification.passed)
    for (const auto& f : out.verification.failures) out.warnings.push_back("verification: " + f);
  return out;
}

}  // namespace logsparse
