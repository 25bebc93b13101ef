#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "logsparse/lssm.hpp"
#include "logsparse/pattern.hpp"
#include "logsparse/symmat.hpp"

namespace logsparse {

/// Minimize <C, X> - epsilon * h(X) over the fiber pi(X) = b. An empty
/// epsilon stands for epsilon = infinity: plain entropy maximization, C unused.
struct SdpInstance {
  Lssm space;
  std::optional<SymMatrix> cost;
  std::vector<double> b;
  std::optional<double> epsilon;
};

struct EntropicSolution {
  std::vector<double> y;
  SymMatrix x_star;
  double residual = 0.0;  // max-norm of pi(X*) - b
  double entropy = 0.0;
  std::size_t iterations = 0;
  /// max-norm residual after each accepted step, starting with y0.
  std::vector<double> residual_history;
  std::vector<std::string> warnings;
};

struct EntropicOptions {
  std::size_t max_iterations = 100;
  unsigned max_halvings = 30;
  /// Success when the residual is below tol * max(1, |b|_inf).
  double tol = 1e-10;
  /// Starting coordinates; zero when empty.
  std::vector<double> y0;
};

/// (<A_1, X>, ..., <A_d, X>) over the basis of L.
std::vector<double> project_pi(const SymMatrix& x, const Lssm& l);

/// trace(X - X log X), from the spectrum. Throws NotPositiveDefinite.
double von_neumann_entropy(const SymMatrix& x);

/// sum_i y_i A_i - C / epsilon.
SymMatrix entropic_exponent(const SdpInstance& inst, std::span<const double> y);

/// Damped Newton on F(y) = pi(exp(sum y_i A_i - C/epsilon)) - b. Throws
/// NoConvergence with the final residual, SingularJacobian when the
/// linearized system has no unique solution, InvalidInput on size errors.
EntropicSolution solve_entropic(const SdpInstance& inst, const EntropicOptions& opts = {});

/// True iff log X lies in the pattern's span to tol. Throws NotPositiveDefinite.
bool logcheck(const SymMatrix& x, const PatternBasis& pattern, double tol = 1e-9);
/// Same test against an arbitrary LSSM.
bool logcheck(const SymMatrix& x, const Lssm& l, double tol = 1e-9);

}  // namespace logsparse
