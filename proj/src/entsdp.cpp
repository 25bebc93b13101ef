#include "logsparse/entsdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "logsparse/error.hpp"

namespace logsparse {

namespace {

constexpr double kSingularRcond = 1e-14;

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double two_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool all_finite(const SymMatrix& m) {
  return std::all_of(m.upper().begin(), m.upper().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

std::vector<double> project_pi(const SymMatrix& x, const Lssm& l) {
  if (x.size() != l.size()) throw Error(ErrorKind::InvalidInput, "project_pi: size mismatch");
  std::vector<double> out;
  out.reserve(l.dim());
  for (const auto& a : l.basis()) out.push_back(inner(a, x));
  return out;
}

double von_neumann_entropy(const SymMatrix& x) {
  const auto eig = eigh(x);
  if (!is_positive_definite(eig))
    throw Error(ErrorKind::NotPositiveDefinite, "von_neumann_entropy: matrix is not positive definite");
  double h = 0.0;
  for (double l : eig.values) h += l - l * std::log(l);
  return h;
}

SymMatrix entropic_exponent(const SdpInstance& inst, std::span<const double> y) {
  const auto& basis = inst.space.basis();
  if (y.size() != basis.size()) throw Error(ErrorKind::InvalidInput, "entropic_exponent: wrong number of coordinates");
  SymMatrix m(inst.space.size());
  for (std::size_t i = 0; i < y.size(); ++i) m += y[i] * basis[i];
  if (inst.epsilon && inst.cost) m -= (1.0 / *inst.epsilon) * *inst.cost;
  return m;
}

EntropicSolution solve_entropic(const SdpInstance& inst, const EntropicOptions& opts) {
  const std::size_t d = inst.space.dim();
  const std::size_t n = inst.space.size();
  if (inst.b.size() != d) throw Error(ErrorKind::InvalidInput, "solve_entropic: b must have one entry per basis element");
  if (inst.epsilon && !(*inst.epsilon > 0.0 && std::isfinite(*inst.epsilon)))
    throw Error(ErrorKind::InvalidInput, "solve_entropic: epsilon must be a positive finite number");
  if (inst.cost && inst.cost->size() != n) throw Error(ErrorKind::InvalidInput, "solve_entropic: cost has the wrong size");
  if (!opts.y0.empty() && opts.y0.size() != d) throw Error(ErrorKind::InvalidInput, "solve_entropic: y0 has the wrong size");

  EntropicSolution sol;
  if (!inst.space.contains_identity()) {
    // The orthogonal projection of id onto L is the natural PD candidate.
    // Up to the Gram matrix, <A_i, id> are its coordinates; for the usual
    // orthogonal pattern bases this is exact.
    SymMatrix p(n);
    const std::vector<double> c = project_pi(SymMatrix::identity(n), inst.space);
    for (std::size_t i = 0; i < d; ++i) p += c[i] * inst.space.basis()[i];
    if (!is_positive_definite(eigh(p)))
      sol.warnings.push_back("no positive definite element of L found; the fiber may miss the Gibbs manifold");
  }

  const double target = opts.tol * std::max(1.0, max_norm(inst.b));
  std::vector<double> y = opts.y0.empty() ? std::vector<double>(d, 0.0) : opts.y0;

  auto evaluate = [&](std::span<const double> yy, SymMatrix& x, std::vector<double>& f) {
    x = expm(entropic_exponent(inst, yy));
    if (!all_finite(x)) return false;
    f = project_pi(x, inst.space);
    for (std::size_t i = 0; i < d; ++i) f[i] -= inst.b[i];
    return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
  };

  SymMatrix x;
  std::vector<double> f;
  if (!evaluate(y, x, f)) throw Error(ErrorKind::NoConvergence, "solve_entropic: exponential overflows at the start point");
  sol.residual_history.push_back(max_norm(f));

  for (std::size_t it = 0;; ++it) {
    if (max_norm(f) <= target) break;
    if (it == opts.max_iterations) {
      std::ostringstream os;
      os << "solve_entropic: no convergence after " << it << " iterations, residual " << max_norm(f);
      throw Error(ErrorKind::NoConvergence, os.str());
    }
    // Jacobian column j is pi of the derivative of exp in direction A_j.
    const SymMatrix m = entropic_exponent(inst, y);
    Eigen::MatrixXd jac(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto col = project_pi(SymMatrix::from_dense(frechet_exp(m, inst.space.basis()[j])), inst.space);
      for (std::size_t i = 0; i < d; ++i) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv(sv.size() - 1) > kSingularRcond * sv(0))) {
      // Singular at the start point means a degenerate basis; later on it
      // means the iterates ran off towards the boundary of the cone.
      std::ostringstream os;
      if (it == 0) {
        os << "solve_entropic: singular Jacobian at the start point (condition estimate "
           << (sv.size() && sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY) << ")";
        throw Error(ErrorKind::SingularJacobian, os.str());
      }
      os << "solve_entropic: Jacobian degenerated at iteration " << it << ", residual " << max_norm(f);
      throw Error(ErrorKind::NoConvergence, os.str());
    }
    Eigen::VectorXd rhs(d);
    for (std::size_t i = 0; i < d; ++i) rhs(static_cast<Eigen::Index>(i)) = -f[i];
    const Eigen::VectorXd step = svd.solve(rhs);

    const double current = two_norm(f);
    double alpha = 1.0;
    bool accepted = false;
    SymMatrix xt;
    std::vector<double> yt(d), ft;
    for (unsigned h = 0; h <= opts.max_halvings; ++h, alpha *= 0.5) {
      for (std::size_t i = 0; i < d; ++i) yt[i] = y[i] + alpha * step(static_cast<Eigen::Index>(i));
      if (evaluate(yt, xt, ft) && two_norm(ft) < current) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "solve_entropic: line search stalled at iteration " << it << ", residual " << max_norm(f);
      throw Error(ErrorKind::NoConvergence, os.str());
    }
    y = std::move(yt);
    x = std::move(xt);
    f = std::move(ft);
    sol.residual_history.push_back(max_norm(f));
    sol.iterations = it + 1;
  }

  sol.y = std::move(y);
  sol.residual = max_norm(f);
  sol.entropy = von_neumann_entropy(x);
  sol.x_star = std::move(x);
  return sol;
}

bool logcheck(const SymMatrix& x, const PatternBasis& pattern, double tol) {
  return pattern_membership(logm(x), pattern, tol);
}

bool logcheck(const SymMatrix& x, const Lssm& l, double tol) {
  if (x.size() != l.size()) throw Error(ErrorKind::InvalidInput, "logcheck: size mismatch");
  const SymMatrix g = logm(x);
  return distance_to_span(g, l.basis()) <= tol * std::max(1.0, g.frobenius_norm());
}

}  // namespace logsparse
