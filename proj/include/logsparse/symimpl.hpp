#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "logsparse/groebner.hpp"
#include "logsparse/lssm.hpp"
#include "logsparse/numimpl.hpp"
#include "logsparse/polynomial.hpp"

namespace logsparse {

/// Ring Q[lam1..lamn, log1..logn, x11..xnn] shared by the symbolic pipeline.
/// Two blocks: eigenvalue variables (both kinds) first, matrix entries second.
struct SymbolicRing {
  std::size_t n = 0;
  VarTable vars;

  explicit SymbolicRing(std::size_t n);
  std::size_t nvars() const noexcept { return vars.size(); }
  std::size_t lam(std::size_t i) const noexcept { return i; }
  std::size_t log(std::size_t i) const noexcept { return n + i; }
  std::size_t x(std::size_t packed) const noexcept { return 2 * n + packed; }
  /// Maps a polynomial that only uses matrix entries to Q[x11..xnn].
  RatPoly to_matrix_ring(const RatPoly& p) const;
};

/// D * log(X) entrywise, with D = prod_{i<j} (lam_i - lam_j) and
/// log(X) = sum_i log_i * prod_{j != i} (X - lam_j id) / (lam_i - lam_j).
struct SymbolicParametrization {
  SymbolicRing ring;
  std::vector<RatPoly> entries;  // packed upper triangle
  RatPoly denominator;

  /// Entry (i, j) evaluated at a point, divided by D there.
  double log_entry(std::size_t i, std::size_t j, std::span<const double> point) const;
};

SymbolicParametrization sylvester_parametrization(std::size_t n);

/// The n relations sigma_k(lam) - e_k(X) tying eigenvalue variables to the
/// characteristic polynomial of X, k = 1..n (trace first, determinant last).
std::vector<RatPoly> charpoly_relations(const SymbolicRing& ring);

/// Point of the symbolic ring for a matrix with its eigendecomposition.
std::vector<double> symbolic_point(const SymbolicRing& ring, const SymMatrix& x);

/// The (n - k + 1)-minors of C(X), columns the L-constraint values of
/// id, X, ..., X^(n-1), with k the generic centralizer dimension of L. Each
/// vanishes on GM. For trees on 4 nodes it is the single sextic.
std::vector<RatPoly> centralizer_minors(const Lssm& l, std::uint64_t seed = 0);

enum class Algorithm2Method {
  /// Rank condition on the L-constraints of id, X, ..., X^(n-1), in Q[x] only.
  Reduced,
  /// The full ring Q[lam, log, x] with the Sylvester entries; slow beyond n = 2.
  Sylvester,
};

struct Algorithm2Options {
  Algorithm2Method method = Algorithm2Method::Reduced;
  GbCaps caps;
  VerifyOptions verify;
  std::uint64_t seed = 0;
};

struct Algorithm2Result {
  std::vector<std::string> vars;  // x11..xnn
  std::vector<RatPoly> generators;
  /// E_1 and E_2 before saturation, in the symbolic ring.
  std::vector<RatPoly> input;
  /// Reduced method only: the maximal minors in Q[x] before saturation.
  std::vector<RatPoly> minors;
  /// The polynomial saturated by, in the ring of the chosen method.
  RatPoly saturating;
  GbStats stats;
  VerifyReport verification;
};

/// Ideal of GV(L) by saturation and elimination.
///
/// E_1 is linear in the log variables, and D log X = sum_i log_i P_i where
/// P_i = prod_{j != i} (X - lam_j) only depends on X and lam_i. Writing P_i
/// in powers of X, E_1 becomes C(X) V(lam) log = 0 with C(X) the matrix
/// whose columns are the L-constraints of id, X, ..., X^(n-1) and V the
/// Vandermonde matrix, invertible off D = 0. On GM the kernel of C(X) has
/// the generic centralizer dimension k, so the Reduced method takes the
/// (n - k + 1)-minors of C(X) and saturates them by disc(X).
///
/// Both methods also saturate by the product of the matrix entries that do
/// not vanish on GM. The relaxation above allows log_i = log_j at distinct
/// eigenvalues, which adds components inside coordinate hyperplanes for
/// reducible patterns; any factor that is nonzero on GM is harmless to the
/// prime ideal. The Sylvester method saturates by D * prod (log_i - log_j)
/// times that product, which also removes log = 0 and log in span(1, ..., 1).
///
/// Refuses disconnected graph patterns (Disconnected) and spaces whose
/// eigenvalues are Q-linearly dependent (QDependentEigenvalues); throws CapExceeded from the Groebner engine and
/// VerificationFailed when a generator does not vanish on the Gibbs manifold.
Algorithm2Result run_algorithm2(const Lssm& l, const Algorithm2Options& opts = {});

}  // namespace logsparse
