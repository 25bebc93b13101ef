#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logsparse/lssm.hpp"
#include "logsparse/pattern.hpp"
#include "logsparse/polynomial.hpp"
#include "logsparse/rational.hpp"
#include "logsparse/symmat.hpp"

namespace logsparse {

/// Monomials in the packed entries x11, x12, ..., xnn of a symmetric matrix.
/// Ordered by ascending total degree; inside one degree, lexicographically
/// larger exponent vectors come first (x11^l is the first of degree l).
class MonomialBasis {
 public:
  MonomialBasis() = default;
  /// Degree exactly `degree` when homogeneous, else every degree <= `degree`.
  MonomialBasis(std::size_t nvars, unsigned degree, bool homogeneous);

  std::size_t nvars() const noexcept { return nvars_; }
  unsigned degree() const noexcept { return degree_; }
  bool homogeneous() const noexcept { return homogeneous_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
  /// Position of m, or size() if m is not in the basis.
  std::size_t index_of(const Monomial& m) const;

  /// Polynomial with the given coefficient vector over this basis.
  RatPoly to_poly(std::span<const Integer> coeffs) const;

 private:
  std::size_t nvars_ = 0;
  unsigned degree_ = 0;
  bool homogeneous_ = false;
  std::vector<Monomial> monomials_;
  std::map<std::array<std::uint8_t, kMaxVars>, std::size_t> index_;
};

/// Sample-by-monomial evaluation matrix, column-major, columns scaled to
/// unit Euclidean norm. column_norms holds the scale removed from each column.
struct VandermondeMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::vector<double> column_norms;

  double operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
};

VandermondeMatrix vandermonde(const std::vector<SymMatrix>& points, const MonomialBasis& basis);

/// Orthonormal basis of the numerical kernel, in the column-scaled
/// coordinates of the matrix it came from.
struct FloatKernelBasis {
  std::vector<std::vector<double>> vectors;
  std::vector<double> singular_values;  // descending
  double tol_used = 0.0;
  /// Empty for an unscaled matrix.
  std::vector<double> column_scale;

  /// Kernel vector i mapped back to unscaled monomial coefficients.
  std::vector<double> coefficients(std::size_t i) const;
};

inline constexpr double kDefaultKernelRtol = 1e-8;
inline constexpr double kDefaultKernelGap = 1e3;

/// Right singular vectors for the smallest singular values. Only values
/// <= rtol * sigma_max may be discarded; among those the cut goes at the
/// largest ratio between neighbours, which must be at least `gap` (values
/// below eps * sigma_max are clamped to it first). Throws KernelAmbiguous
/// when small values exist but no such ratio does, and InvalidInput when
/// rows < cols.
FloatKernelBasis kernel(VandermondeMatrix a, double rtol = kDefaultKernelRtol, double gap = kDefaultKernelGap);
FloatKernelBasis kernel(const Matrix& a, double rtol = kDefaultKernelRtol, double gap = kDefaultKernelGap);

/// Coprime integer vector whose direction matches v to 1e-6 in angle. The
/// first nonzero entry is made positive. Throws RationalizationFailed.
std::vector<Integer> rationalize(std::span<const double> v, long maxden = 1'000'000);

/// Rational basis of the span of the given vectors: echelon form on pivot
/// monomials chosen largest-first, each row cleared to coprime integers.
/// With column_scale the vectors are in scaled coordinates and the result
/// is in unscaled monomial coefficients. Throws RationalizationFailed.
std::vector<std::vector<Integer>> rationalize_span(const std::vector<std::vector<double>>& vectors,
                                                   const MonomialBasis& basis, long maxden = 1'000'000,
                                                   std::span<const double> column_scale = {});

struct VerifyOptions {
  std::size_t samples = 200;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  double sample_scale = 1.0;
  /// Extra permutations to test; invariant ones are auto-detected for n <= 6.
  std::vector<Permutation> symmetries;
  bool detect_symmetries = true;
};

struct VerifyReport {
  bool passed = true;
  double max_residual = 0.0;
  std::vector<double> residuals;  // one per polynomial
  std::size_t samples = 0;
  std::vector<Permutation> symmetries_used;
  double symmetry_max_residual = 0.0;
  std::vector<std::string> failures;
};

/// |p(X)| / (||p||_1 * max(1, ||X||_inf)^deg p) at a point X given by its
/// packed entries.
double normalized_residual(const RatPoly& p, std::span<const double> point);

/// Image of p under x_ij -> x_sigma(i)sigma(j).
RatPoly permute_polynomial(const RatPoly& p, std::size_t n, const Permutation& sigma);

/// Evaluates every polynomial on exp(sample) for fresh samples, plus every
/// permuted copy for permutations that leave L invariant.
VerifyReport verify(const std::vector<RatPoly>& polys, const Lssm& l, const VerifyOptions& opts = {});

enum class BasisMode { Auto, Homogeneous, Full };

struct Algorithm1Options {
  bool stop_after_first = false;
  std::uint64_t seed = 0;
  double rtol = kDefaultKernelRtol;
  double gap = kDefaultKernelGap;
  double oversample = 1.25;
  /// 0 picks 2 for the homogeneous basis and 1 otherwise.
  double sample_scale = 0.0;
  long maxden = 1'000'000;
  BasisMode basis = BasisMode::Auto;
  VerifyOptions verify;
};

struct DegreeSummary {
  unsigned degree = 0;
  std::size_t basis_size = 0;
  std::size_t samples = 0;
  std::size_t kernel_dim = 0;
  std::size_t deflated = 0;   // kernel directions explained by lower-degree finds
  std::size_t found = 0;
  double sigma_max = 0.0;
  double sigma_kept_min = 0.0;     // 0 when every value was discarded
  double sigma_discarded_max = 0.0;  // 0 when nothing was discarded
  double seconds = 0.0;
};

struct RationalEquationSet {
  std::size_t n = 0;
  std::vector<std::string> vars;
  std::vector<RatPoly> polynomials;
  std::vector<unsigned> degrees;
  std::vector<std::size_t> term_counts;
  VerifyReport verification;
  std::vector<DegreeSummary> per_degree;
  bool homogeneous_basis = false;
  std::vector<std::string> warnings;
};

/// Numerical implicitization of GV(L) up to degree maxdeg.
RationalEquationSet run_algorithm1(const Lssm& l, unsigned maxdeg, const Algorithm1Options& opts = {});

}  // namespace logsparse
