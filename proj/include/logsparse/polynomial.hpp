#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logsparse/rational.hpp"
#include "logsparse/simd/kernels.hpp"

namespace logsparse {

inline constexpr std::size_t kMaxVars = simd::kMonoBytes;

/// Exponent vector over at most 32 variables, one byte per exponent.
struct alignas(32) Monomial {
  std::array<std::uint8_t, kMaxVars> e{};

  unsigned degree() const noexcept;
  /// Throws CapExceeded if an exponent would pass 255.
  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const noexcept;
  /// o / *this; requires divides(o).
  Monomial quotient_of(const Monomial& o) const noexcept;
  static Monomial lcm(const Monomial& a, const Monomial& b) noexcept;
  bool coprime(const Monomial& o) const noexcept;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lex comparison: degree first, then the larger exponent of the
/// earliest differing variable wins. Returns <0, 0, >0.
int graded_lex_compare(const Monomial& a, const Monomial& b) noexcept;

/// Named variables partitioned into elimination blocks; block 0 is the
/// most expensive one in a block order.
class VarTable {
 public:
  VarTable() = default;
  /// One block per entry of `blocks`.
  explicit VarTable(std::vector<std::vector<std::string>> blocks);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::size_t block_of(std::size_t var) const { return block_[var]; }
  std::size_t block_count() const noexcept { return block_vars_.size(); }
  const std::vector<std::size_t>& block_vars(std::size_t b) const { return block_vars_[b]; }
  /// Index of `name`, or size() if absent.
  std::size_t index(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> block_;
  std::vector<std::vector<std::size_t>> block_vars_;
};

/// Sparse polynomial over Q. Terms are kept sorted by descending graded-lex
/// order with no zero coefficients.
class RatPoly {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  RatPoly() = default;
  explicit RatPoly(std::size_t nvars);
  static RatPoly constant(std::size_t nvars, const Rational& c);
  static RatPoly variable(std::size_t nvars, std::size_t index);
  static RatPoly monomial(std::size_t nvars, const Monomial& m, const Rational& c);
  /// Terms in any order; like terms are merged and zeros dropped.
  static RatPoly from_terms(std::size_t nvars, std::vector<Term> terms);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  /// Total degree; -1 for the zero polynomial.
  int degree() const noexcept;
  bool is_homogeneous() const noexcept;
  /// True iff the polynomial involves only variables whose index is in `vars`.
  bool uses_only(std::span<const std::size_t> vars) const noexcept;
  Rational coefficient(const Monomial& m) const;

  RatPoly& operator+=(const RatPoly& o);
  RatPoly& operator-=(const RatPoly& o);
  RatPoly& operator*=(const Rational& c);
  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const Rational& c, RatPoly a) { return a *= c; }
  friend RatPoly operator-(RatPoly a) { return a *= Rational(-1); }
  friend bool operator==(const RatPoly& a, const RatPoly& b);

  RatPoly pow(unsigned k) const;
  /// Replaces variable i by images[i]; all images share one variable count.
  RatPoly substitute(std::span<const RatPoly> images) const;
  RatPoly substitute(std::size_t var, const RatPoly& value) const;
  /// Moves variable i to index map[i] in a ring with `new_nvars` variables.
  RatPoly remap(std::span<const std::size_t> map, std::size_t new_nvars) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate(std::span<const Rational> point) const;
  /// Sum of |coefficients|.
  double l1_norm() const;

  /// Coprime integer multiple whose leading (graded-lex) coefficient is positive.
  RatPoly primitive() const;

  std::string to_string(std::span<const std::string> names) const;

 private:
  void normalize();

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Parses "3*x11^2 - x12*x13 + 1/2" style input over the given names.
/// Throws InvalidInput on unknown names or malformed text.
RatPoly parse_polynomial(std::string_view text, std::span<const std::string> names);

/// Variable names x11, x12, ..., xnn in packed upper-triangle order.
std::vector<std::string> matrix_variable_names(std::size_t n);

}  // namespace logsparse
