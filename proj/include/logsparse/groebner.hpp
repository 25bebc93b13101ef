#pragma once

#include <cstddef>
#include <vector>

#include "logsparse/polynomial.hpp"

namespace logsparse {

/// Block order: blocks compared in sequence (block 0 first and most
/// expensive), graded reverse lexicographic inside each block.
class MonomialOrder {
 public:
  MonomialOrder() = default;
  explicit MonomialOrder(const VarTable& vars);
  /// Plain grevlex over nvars variables (one block, index order).
  static MonomialOrder grevlex(std::size_t nvars);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }

  /// <0, 0, >0 as a is smaller, equal or larger than b.
  int compare(const Monomial& a, const Monomial& b) const noexcept;

 private:
  std::size_t nvars_ = 0;
  std::vector<std::vector<std::size_t>> blocks_;
};

struct GbCaps {
  unsigned max_degree = 24;
  std::size_t max_pairs = 200000;
  double time_budget_seconds = 600.0;
};

struct GbStats {
  std::size_t pairs_considered = 0;
  std::size_t pairs_reduced = 0;
  std::size_t zero_reductions = 0;
  std::size_t basis_size = 0;
  unsigned max_degree_seen = 0;
  double seconds = 0.0;
};

/// Leading monomial of a nonzero polynomial under `order`.
Monomial leading_monomial(const RatPoly& f, const MonomialOrder& order);

/// Normal form of f modulo G: no term of the result is divisible by a
/// leading monomial of G. The result is f minus an element of <G>, up to a
/// nonzero rational factor that is removed again.
RatPoly reduce(const RatPoly& f, const std::vector<RatPoly>& g, const MonomialOrder& order);

/// Reduced Gröbner basis of <gens>. Generators are returned as primitive
/// integer polynomials with positive leading coefficient, sorted by leading
/// monomial ascending. Throws CapExceeded when a cap is hit.
std::vector<RatPoly> buchberger(const std::vector<RatPoly>& gens, const MonomialOrder& order,
                                const GbCaps& caps = {}, GbStats* stats = nullptr);

/// The elements of a block-order Gröbner basis that only use variables
/// from blocks first_kept_block, first_kept_block + 1, ...
std::vector<RatPoly> eliminate(const std::vector<RatPoly>& gb, const MonomialOrder& order,
                               std::size_t first_kept_block);

/// Generators (a Gröbner basis for `order`) of <gens> : D^infinity, via the
/// auxiliary variable t with t*D - 1 adjoined in a new top block.
std::vector<RatPoly> saturate(const std::vector<RatPoly>& gens, const RatPoly& d, const MonomialOrder& order,
                              const GbCaps& caps = {}, GbStats* stats = nullptr);

/// S-polynomial of f and g.
RatPoly s_polynomial(const RatPoly& f, const RatPoly& g, const MonomialOrder& order);

}  // namespace logsparse
