#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace logsparse {

/// Dense row-major matrix. Used for eigenvector bases, Fréchet derivatives
/// and other intermediates that are not symmetric by construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;
  double max_abs() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Real symmetric n x n matrix holding only the upper triangle, row-major
/// over (i, j) with i <= j: (0,0), (0,1), ..., (0,n-1), (1,1), ...
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), upper_(n * (n + 1) / 2, 0.0) {}

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  /// Throws InvalidInput if `upper` has the wrong length.
  static SymMatrix from_upper(std::size_t n, std::vector<double> upper);
  /// Symmetrizes (M + M^T) / 2.
  static SymMatrix from_dense(const Matrix& m);

  std::size_t size() const noexcept { return n_; }
  static std::size_t packed_size(std::size_t n) noexcept { return n * (n + 1) / 2; }
  /// Position of (i, j) in the packed upper triangle; argument order is irrelevant.
  static std::size_t packed_index(std::size_t n, std::size_t i, std::size_t j) noexcept;

  double operator()(std::size_t i, std::size_t j) const { return upper_[packed_index(n_, i, j)]; }
  /// Mutable access; (i, j) and (j, i) alias the same storage cell.
  double& at(std::size_t i, std::size_t j) { return upper_[packed_index(n_, i, j)]; }

  std::span<const double> upper() const noexcept { return upper_; }
  std::span<double> upper() noexcept { return upper_; }

  Matrix dense() const;

  double trace() const;
  double max_abs() const;
  double frobenius_norm() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> upper_;
};

/// Frobenius inner product trace(A B) of symmetric matrices.
double inner(const SymMatrix& a, const SymMatrix& b);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column i pairs with values[i]
};

/// Cyclic Jacobi eigensolver. Throws NoConvergence past 100 sweeps.
EigenDecomposition eigh(const SymMatrix& s);

/// Q f(diag) Q^T for a decomposition and per-eigenvalue function values.
SymMatrix spectral_apply(const EigenDecomposition& eig, std::span<const double> fvals);

SymMatrix expm(const SymMatrix& s);

/// Relative positive-definiteness cutoff: min eigenvalue must exceed
/// kPdTolerance * max(1, max eigenvalue).
inline constexpr double kPdTolerance = 1e-10;

bool is_positive_definite(const EigenDecomposition& eig) noexcept;

/// Throws NotPositiveDefinite when the cutoff above fails.
SymMatrix logm(const SymMatrix& p);

/// Inverse of a positive definite matrix via its spectrum.
SymMatrix inverse_pd(const SymMatrix& p);

/// exp of a general square matrix: scaling and squaring over a truncated
/// Taylor series. Only used on block matrices built by frechet_exp.
Matrix expm_general(const Matrix& a);

/// Directional derivative D exp(A)[E], read off the upper-right block of
/// exp([[A, E], [0, A]]).
Matrix frechet_exp(const SymMatrix& a, const SymMatrix& e);

/// Relative eigenvalue gap below which Sylvester interpolation is refused.
inline constexpr double kSylvesterGap = 1e-8;

/// Sum over i of fvals[i] * M_i with the Lagrange–Sylvester projectors
/// M_i = prod_{j != i} (M - lambda_j id) / (lambda_i - lambda_j), eigenvalues
/// taken in ascending order. Throws DegenerateSpectrum on near-repeated
/// eigenvalues.
SymMatrix sylvester_apply(std::span<const double> fvals, const SymMatrix& m);

}  // namespace logsparse
