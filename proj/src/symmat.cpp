#include "logsparse/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "logsparse/error.hpp"
#include "logsparse/simd/kernels.hpp"

namespace logsparse {

// ---------------------------------------------------------------- Matrix

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidInput, "matrix product: shape mismatch");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data_) v *= s;
  return c;
}

// ------------------------------------------------------------- SymMatrix

std::size_t SymMatrix::packed_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  if (i > j) std::swap(i, j);
  return i * n - (i * (i + 1)) / 2 + j;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) s.at(i, i) = 1.0;
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.at(i, i) = d[i];
  return s;
}

SymMatrix SymMatrix::from_upper(std::size_t n, std::vector<double> upper) {
  if (upper.size() != packed_size(n))
    throw Error(ErrorKind::InvalidInput, "upper triangle of a " + std::to_string(n) + "x" +
                                             std::to_string(n) + " matrix needs " +
                                             std::to_string(packed_size(n)) + " entries, got " +
                                             std::to_string(upper.size()));
  SymMatrix s;
  s.n_ = n;
  s.upper_ = std::move(upper);
  return s;
}

SymMatrix SymMatrix::from_dense(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidInput, "from_dense: matrix not square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.rows(); ++j) s.at(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

Matrix SymMatrix::dense() const {
  Matrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) m(i, j) = m(j, i) = (*this)(i, j);
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : upper_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::frobenius_norm() const { return std::sqrt(inner(*this, *this)); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorKind::InvalidInput, "SymMatrix +=: size mismatch");
  for (std::size_t i = 0; i < upper_.size(); ++i) upper_[i] += o.upper_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorKind::InvalidInput, "SymMatrix -=: size mismatch");
  for (std::size_t i = 0; i < upper_.size(); ++i) upper_[i] -= o.upper_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : upper_) v *= s;
  return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "inner: size mismatch");
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s += (i == j ? 1.0 : 2.0) * a(i, j) * b(i, j);
  return s;
}

// ---------------------------------------------------------------- eigh

EigenDecomposition eigh(const SymMatrix& s) {
  constexpr int kMaxSweeps = 100;
  constexpr double kOffTolerance = 1e-14;

  const std::size_t n = s.size();
  const auto& k = simd::kernels();
  Matrix a = s.dense();
  Matrix vt = Matrix::identity(n);  // rows are eigenvectors
  const double fro = s.frobenius_norm();

  auto off_norm = [&] {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    return std::sqrt(off);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (off_norm() <= kOffTolerance * fro) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(p, p) - a(q, q)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double sn = t * c;
        // A <- J^T A J, J the (p, q) plane rotation
        k.rotate(a.row(p).data(), a.row(q).data(), c, sn, n);
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - sn * aiq;
          a(i, q) = sn * aip + c * aiq;
        }
        a(p, q) = a(q, p) = 0.0;
        k.rotate(vt.row(p).data(), vt.row(q).data(), c, sn, n);
      }
    }
  }
  if (!converged)
    throw Error(ErrorKind::NoConvergence, "eigh: Jacobi sweeps did not converge in 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomposition eig;
  eig.values.resize(n);
  eig.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    eig.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) eig.vectors(r, c) = vt(order[c], r);
  }
  return eig;
}

SymMatrix spectral_apply(const EigenDecomposition& eig, std::span<const double> fvals) {
  const std::size_t n = eig.values.size();
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += eig.vectors(i, c) * fvals[c] * eig.vectors(j, c);
      out.at(i, j) = s;
    }
  return out;
}

SymMatrix expm(const SymMatrix& s) {
  const EigenDecomposition eig = eigh(s);
  std::vector<double> f(eig.values.size());
  std::transform(eig.values.begin(), eig.values.end(), f.begin(), [](double v) { return std::exp(v); });
  return spectral_apply(eig, f);
}

bool is_positive_definite(const EigenDecomposition& eig) noexcept {
  if (eig.values.empty()) return true;
  return eig.values.front() > kPdTolerance * std::max(1.0, eig.values.back());
}

namespace {

const EigenDecomposition& require_pd(const EigenDecomposition& eig, const char* what) {
  if (!is_positive_definite(eig))
    throw Error(ErrorKind::NotPositiveDefinite,
                std::string(what) + ": matrix is not positive definite (min eigenvalue " +
                    std::to_string(eig.values.front()) + ")");
  return eig;
}

}  // namespace

SymMatrix logm(const SymMatrix& p) {
  const EigenDecomposition eig = eigh(p);
  require_pd(eig, "logm");
  std::vector<double> f(eig.values.size());
  std::transform(eig.values.begin(), eig.values.end(), f.begin(), [](double v) { return std::log(v); });
  return spectral_apply(eig, f);
}

SymMatrix inverse_pd(const SymMatrix& p) {
  const EigenDecomposition eig = eigh(p);
  require_pd(eig, "inverse_pd");
  std::vector<double> f(eig.values.size());
  std::transform(eig.values.begin(), eig.values.end(), f.begin(), [](double v) { return 1.0 / v; });
  return spectral_apply(eig, f);
}

// ------------------------------------------------------ general exp / Fréchet

Matrix expm_general(const Matrix& a) {
  constexpr int kTaylorTerms = 20;
  const std::size_t n = a.rows();
  double norm1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a(i, j));
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Matrix scaled = std::ldexp(1.0, -squarings) * a;

  // Horner: I + X (I + X/2 (I + X/3 (...)))
  Matrix result = Matrix::identity(n);
  for (int k = kTaylorTerms; k >= 1; --k) {
    result = Matrix::identity(n) + (1.0 / k) * (scaled * result);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix frechet_exp(const SymMatrix& a, const SymMatrix& e) {
  if (a.size() != e.size()) throw Error(ErrorKind::InvalidInput, "frechet_exp: size mismatch");
  const std::size_t n = a.size();
  Matrix block(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      block(i, j) = a(i, j);
      block(n + i, n + j) = a(i, j);
      block(i, n + j) = e(i, j);
    }
  const Matrix big = expm_general(block);
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = big(i, n + j);
  return d;
}

// --------------------------------------------------------------- Sylvester

SymMatrix sylvester_apply(std::span<const double> fvals, const SymMatrix& m) {
  const std::size_t n = m.size();
  if (fvals.size() != n) throw Error(ErrorKind::InvalidInput, "sylvester_apply: need one value per eigenvalue");
  const EigenDecomposition eig = eigh(m);
  const auto& lam = eig.values;
  double radius = 0.0;
  for (double v : lam) radius = std::max(radius, std::abs(v));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (lam[i + 1] - lam[i] <= kSylvesterGap * radius)
      throw Error(ErrorKind::DegenerateSpectrum,
                  "sylvester_apply: eigenvalues " + std::to_string(lam[i]) + " and " +
                      std::to_string(lam[i + 1]) + " are not separated");
  }
  const Matrix dm = m.dense();
  Matrix total(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix proj = Matrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      Matrix factor = dm;
      for (std::size_t r = 0; r < n; ++r) factor(r, r) -= lam[j];
      proj = (1.0 / (lam[i] - lam[j])) * (proj * factor);
    }
    total = total + fvals[i] * proj;
  }
  return SymMatrix::from_dense(total);
}

}  // namespace logsparse
