#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logsparse/pattern.hpp"
#include "logsparse/rational.hpp"
#include "logsparse/symmat.hpp"

namespace logsparse {

enum class PatternKind { Generic, Graph, Coloured };

/// A linear space of symmetric matrices span(A_1, ..., A_d).
class Lssm {
 public:
  static Lssm from_graph(const Graph& g);
  static Lssm from_coloured(const ColouredGraph& cg);
  /// Numeric basis. Entries that are exactly p/q with q <= 10^6 make the
  /// space rational; otherwise exact routines refuse it.
  static Lssm from_basis(std::vector<SymMatrix> basis, std::vector<std::string> labels = {});
  static Lssm from_rational_basis(std::vector<RatSymMatrix> basis, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<SymMatrix>& basis() const noexcept { return basis_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  PatternKind kind() const noexcept { return kind_; }
  bool is_rational() const noexcept { return exact_.has_value(); }
  /// Throws NonRationalBasis when the space is not rational.
  const std::vector<RatSymMatrix>& exact_basis() const;
  bool contains_identity() const noexcept { return contains_identity_; }
  const std::optional<Graph>& graph() const noexcept { return graph_; }
  const std::optional<ColouredGraph>& coloured() const noexcept { return coloured_; }

  SymMatrix element(std::span<const double> y) const;
  RatSymMatrix exact_element(std::span<const Rational> y) const;

  /// Rows c over packed (upper-triangle) coordinates with sum_k c_k a_k = 0
  /// for every element a of the space; together they cut the space out of S^n.
  RatRows constraints() const;

  /// True iff sigma(A) stays in the space for every basis element.
  bool invariant_under(const Permutation& sigma) const;

 private:
  void finish();

  std::size_t n_ = 0;
  std::vector<SymMatrix> basis_;
  std::optional<std::vector<RatSymMatrix>> exact_;
  std::vector<std::string> labels_;
  PatternKind kind_ = PatternKind::Generic;
  bool contains_identity_ = false;
  std::optional<Graph> graph_;
  std::optional<ColouredGraph> coloured_;
};

/// Deterministic 64-bit stream derived from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

struct Sample {
  std::vector<double> y;
  SymMatrix matrix;
};

/// y uniform on [-scale, scale]^d, M = sum y_i A_i. Same (seed, index) gives the same sample.
Sample sample(const Lssm& l, std::uint64_t seed, std::uint64_t index = 0, double scale = 1.0);

/// Generic L-centralizer dimension: minimum over `trials` random rational
/// points (two disagreeing trials trigger a tie-break trial).
struct CentralizerResult {
  int k = 0;
  std::vector<int> trial_values;
  std::vector<std::string> warnings;
};
CentralizerResult centralizer(const Lssm& l, std::uint64_t seed = 0, int trials = 2);
int centralizer_dimension(const Lssm& l, std::uint64_t seed = 0, int trials = 2);

struct EigenSpanOptions {
  bool force_numeric = false;  // skip the connected-graph shortcut
  long height = 10;
  double lattice_scale = 1e10;
  int points = 3;
  double confirm_tol = 1e-8;
  std::uint64_t seed = 0;
};

struct EigenSpan {
  int m = 0;
  /// Accepted relations, coefficients over eigenvalues sorted ascending at the first point.
  std::vector<std::vector<long>> relations;
  bool shortcut = false;
};

EigenSpan eigenvalue_span(const Lssm& l, const EigenSpanOptions& opts = {});
int eigenvalue_span_dimension(const Lssm& l, const EigenSpanOptions& opts = {});

/// Relation written independent of eigenvalue labelling and sign: the
/// lexicographically larger of sort_desc(c) and sort_desc(-c).
std::vector<long> canonical_relation(std::vector<long> c);

struct DimensionBound {
  std::string name;
  long value = 0;
};

struct DimensionReport {
  std::size_t n = 0;
  std::size_t d = 0;
  int m = 0;
  int k = 0;
  long gv_dim = 0;
  long ambient = 0;
  std::vector<DimensionBound> bounds;
  bool semialgebraic = false;
  std::optional<long> conjecture_value;
  std::vector<std::vector<long>> relations;
  std::vector<std::string> warnings;
};

struct DimensionOptions {
  std::uint64_t seed = 0;
  int centralizer_trials = 2;
  EigenSpanOptions eigen;
};

/// Throws Disconnected for graph and coloured patterns on disconnected
/// graphs; spaces given by a basis pass.
void validate_connected(const Lssm& l);

DimensionReport gibbs_dimension(const Lssm& l, const DimensionOptions& opts = {});

/// n^(binom(n+1, 2) + 2n), exactly.
Integer degree_bound(unsigned n);

}  // namespace logsparse
